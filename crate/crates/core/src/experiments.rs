//! Batch harness for the simulation study and the two figures.
//!
//! Everything here is deterministic given the seed. Table repeats are
//! independent jobs keyed by `(seed, configuration, repeat)`, so results do
//! not depend on how repeats are scheduled.

use std::cmp::Ordering;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{limiting_pu_pareto, upsilon_star, RedGreenModel};
use crate::distributions::ReturnDistribution;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::gpd_inference::{estimate_pu_gpd_keyed, fit_gpd_shared_shape, Label, TopKSample, MIN_GPD_REPLICATES};
use crate::monte_carlo::{pu_sweep, split_counts, OddsRatio};
use crate::numeric::MeanVar;
use crate::rng::StreamKey;

/// The eight `(base, Δ, γ)` rows of the simulation study.
pub fn table1_configurations() -> Vec<(ReturnDistribution, f64, f64)> {
    let mut out = Vec::with_capacity(8);
    for base in [ReturnDistribution::Gaussian, ReturnDistribution::StudentT { nu: 12.0 }] {
        for (delta, gamma) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.2), (0.5, 0.2)] {
            out.push((base, delta, gamma));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Config {
    pub repeats: u64,
    pub s: u64,
    pub eta: f64,
    pub k: usize,
    /// Monte Carlo replicates for each `p̂_U`.
    pub pu_replicates: u64,
    pub seed: u64,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl Default for Table1Config {
    fn default() -> Self {
        Table1Config {
            repeats: 10_000,
            s: 10_000,
            eta: 0.1,
            k: 200,
            pu_replicates: 100_000,
            seed: 1,
            parallelism: Parallelism::default(),
        }
    }
}

impl Table1Config {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::config("repeats must be positive"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::domain(format!("eta must lie in (0,1), got {}", self.eta)));
        }
        if self.k == 0 || self.s <= self.k as u64 {
            return Err(Error::config(format!("need 0 < k < S, got k = {} and S = {}", self.k, self.s)));
        }
        let (m, n) = split_counts(self.s, self.eta);
        if m == 0 || n == 0 {
            return Err(Error::config(format!("S = {} with eta = {} leaves an empty group", self.s, self.eta)));
        }
        if self.pu_replicates < MIN_GPD_REPLICATES {
            return Err(Error::config(format!(
                "p_U replicates must be >= {MIN_GPD_REPLICATES}, got {}",
                self.pu_replicates
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub base: ReturnDistribution,
    pub delta: f64,
    pub gamma: f64,
    /// Fraction of repeats whose best strategy is red.
    pub p_u_true: f64,
    pub p_u_prime_mean: f64,
    /// Mean of `p̂_U` over repeats whose fit succeeded.
    pub p_u_hat_mean: f64,
    /// Rejection rate of the 5% likelihood-ratio test over successful fits.
    pub power: f64,
    pub repeats: u64,
    pub fit_failures: u64,
    pub zero_count_redraws: u64,
}

struct RepeatOutcome {
    red_wins: bool,
    p_u_prime: f64,
    fitted: Option<(f64, bool)>,
    redraws: u64,
}

/// The `count` largest of `len` draws from `model`'s red or green law.
///
/// Draws upper-tail levels `v ~ U(0,1)` and keeps the `count` smallest before
/// inverting, which is equal in law to sorting the full sample.
fn top_draws(rng: &mut impl Rng, len: u64, count: usize, transform: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| rng.sample(Open01)).collect();
    let count = count.min(v.len());
    if count < v.len() {
        v.select_nth_unstable_by(count, f64::total_cmp);
        v.truncate(count);
    }
    v.into_iter().map(transform).collect()
}

fn run_repeat(model: &RedGreenModel, cfg: &Table1Config, key: StreamKey) -> Result<RepeatOutcome> {
    let (m, n) = split_counts(cfg.s, model.eta);
    let mut rng = key.child(0).rng();
    let base = model.base;
    let red = top_draws(&mut rng, m, cfg.k + 1, |v| model.red_return(base.isf(v)));
    let green = top_draws(&mut rng, n, cfg.k + 1, |v| base.isf(v));

    let best = |x: &[f64]| x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let red_wins = best(&red) > best(&green);

    let obs: Vec<(f64, Label)> =
        red.iter().map(|&x| (x, Label::Red)).chain(green.iter().map(|&x| (x, Label::Green))).collect();
    let sample = TopKSample::from_returns(&obs, cfg.k)?;

    let (fitted, redraws) = match fit_gpd_shared_shape(&sample) {
        Ok(fit) => {
            let pu = estimate_pu_gpd_keyed(&fit, &sample, cfg.pu_replicates, key.child(1), Parallelism::Sequential)?;
            (Some((pu.p_u_hat, fit.rejects_equal_scales())), pu.zero_count_redraws)
        }
        Err(Error::InsufficientData(_) | Error::Degenerate(_) | Error::NonConvergence(_)) => (None, 0),
        Err(e) => return Err(e),
    };
    Ok(RepeatOutcome { red_wins, p_u_prime: sample.p_u_prime(), fitted, redraws })
}

/// Runs the simulation study over [`table1_configurations`].
///
/// Each repeat draws `S` returns, keeps the top `k`, fits the shared-shape
/// GPD, and records whether red won, `k_R/k`, `p̂_U` and the LR decision.
/// Repeats whose fit fails are excluded from `p̂_U` and power and counted.
pub fn run_table1(cfg: &Table1Config) -> Result<Vec<Table1Row>> {
    cfg.validate()?;
    let root = StreamKey::root(cfg.seed);
    table1_configurations()
        .into_iter()
        .enumerate()
        .map(|(c, (base, delta, gamma))| {
            let model = RedGreenModel::new(base, cfg.eta, delta, gamma)?;
            let key = root.child(c as u64);
            let outcomes = cfg.parallelism.map(cfg.repeats as usize, |r| run_repeat(&model, cfg, key.child(r as u64)));

            let (mut wins, mut prime, mut hat, mut power) =
                (MeanVar::default(), MeanVar::default(), MeanVar::default(), MeanVar::default());
            let mut fit_failures = 0;
            let mut zero_count_redraws = 0;
            for o in outcomes {
                let o = o?;
                wins.push(f64::from(u8::from(o.red_wins)));
                prime.push(o.p_u_prime);
                zero_count_redraws += o.redraws;
                match o.fitted {
                    Some((p, reject)) => {
                        hat.push(p);
                        power.push(f64::from(u8::from(reject)));
                    }
                    None => fit_failures += 1,
                }
            }
            let mean_or_nan = |s: &MeanVar| if s.count() == 0 { f64::NAN } else { s.mean() };
            Ok(Table1Row {
                base,
                delta,
                gamma,
                p_u_true: wins.mean(),
                p_u_prime_mean: prime.mean(),
                p_u_hat_mean: mean_or_nan(&hat),
                power: mean_or_nan(&power),
                repeats: cfg.repeats,
                fit_failures,
                zero_count_redraws,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure1Point {
    pub nu: f64,
    pub gamma: f64,
    pub upsilon_star: f64,
}

/// `Υ* = (1 + γ)^ν` over a grid, `ν` varying fastest.
pub fn figure1_data(nu_grid: &[f64], gamma_grid: &[f64]) -> Result<Vec<Figure1Point>> {
    if nu_grid.is_empty() || gamma_grid.is_empty() {
        return Err(Error::config("figure 1 grids must be non-empty"));
    }
    let mut out = Vec::with_capacity(nu_grid.len() * gamma_grid.len());
    for &gamma in gamma_grid {
        for &nu in nu_grid {
            out.push(Figure1Point { nu, gamma, upsilon_star: upsilon_star(gamma, nu)? });
        }
    }
    Ok(out)
}

pub fn default_figure1_grids() -> (Vec<f64>, Vec<f64>) {
    let nu = (1..=40).map(|i| i as f64 * 0.5).collect();
    let gamma = (0..=10).map(|i| i as f64 * 0.05).collect();
    (nu, gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure2Point {
    pub base: ReturnDistribution,
    pub delta: f64,
    pub gamma: f64,
    pub s: u64,
    pub p_u: f64,
    pub upsilon: OddsRatio,
    pub std_error: f64,
    /// Limiting `p_U` for Pareto-type bases.
    pub asymptote: Option<f64>,
}

pub fn default_figure2_configs() -> Vec<(f64, f64)> {
    vec![(0.0, 0.2), (0.5, 0.2), (0.5, 0.0)]
}

pub fn default_figure2_bases() -> Vec<ReturnDistribution> {
    vec![ReturnDistribution::Gaussian, ReturnDistribution::StudentT { nu: 12.0 }]
}

/// Half-decade grid from 10 to 10^8.
pub fn default_s_grid() -> Vec<u64> {
    (2..=16).map(|i| 10f64.powf(i as f64 / 2.0).round() as u64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure2Config {
    pub eta: f64,
    pub replicates: u64,
    pub seed: u64,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

/// `p_U` and `Υ` against `S` for each base and `(Δ, γ)`.
///
/// All curves share the seed, so differences between them are not blurred
/// by independent Monte Carlo noise.
pub fn figure2_data(
    bases: &[ReturnDistribution],
    configs: &[(f64, f64)],
    s_grid: &[u64],
    cfg: &Figure2Config,
) -> Result<Vec<Figure2Point>> {
    if bases.is_empty() || configs.is_empty() {
        return Err(Error::config("figure 2 needs at least one base and one (delta, gamma) pair"));
    }
    let mut out = Vec::new();
    for &base in bases {
        for &(delta, gamma) in configs {
            let model = RedGreenModel::new(base, cfg.eta, delta, gamma)?;
            let asymptote = match base.nu() {
                Some(nu) => Some(limiting_pu_pareto(cfg.eta, gamma, nu)?),
                None => None,
            };
            for point in pu_sweep(&model, s_grid, cfg.replicates, cfg.seed, cfg.parallelism)? {
                let e = point.estimate;
                out.push(Figure2Point {
                    base,
                    delta,
                    gamma,
                    s: point.s,
                    p_u: e.p_u,
                    upsilon: e.upsilon,
                    std_error: e.std_error,
                    asymptote,
                });
            }
        }
    }
    Ok(out)
}

/// Least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (sxy, sxx) =
        x.iter().zip(y).fold((0.0, 0.0), |(sxy, sxx), (a, b)| (sxy + (a - mx) * (b - my), sxx + (a - mx) * (a - mx)));
    sxy / sxx
}

/// Whether `v` is non-decreasing (`Ordering::Less`) or non-increasing.
pub fn is_monotone(v: &[f64], direction: Ordering) -> bool {
    v.windows(2).all(|w| w[0].partial_cmp(&w[1]).is_some_and(|o| o == direction || o == Ordering::Equal))
}
