//! Finite-size estimation of `p_U = Pr(M_R > M_G)`.
//!
//! [`pu_antithetic`] draws the red maximum directly by inversion,
//! `M* = F⁻¹(U^{1/m})`, and averages the exact conditional probability
//! `Pr(M_G < Δ + (1+γ) M*) = F(Δ + (1+γ) M*)^n`, pairing each `U` with
//! `1 - U`. [`pu_direct`] is the brute-force oracle: simulate all `S`
//! returns and check the colour of the best one.
//!
//! Replicates are processed in fixed batches; batch `b` draws from substream
//! `(seed, b)`, so estimates are bit-identical under any [`Parallelism`].

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, LogNormal, Pareto, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{odds_ratio, RedGreenModel};
use crate::distributions::ReturnDistribution;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::numeric::MeanVar;
use crate::rng::StreamKey;

/// Replicates per batch (and per substream).
pub const BATCH: u64 = 4096;

pub const DEFAULT_REPLICATES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuSimConfig {
    pub model: RedGreenModel,
    /// Size of the strategy space.
    pub s: u64,
    /// Monte Carlo replicates `R`.
    pub replicates: u64,
    pub seed: u64,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl PuSimConfig {
    pub fn new(model: RedGreenModel, s: u64, replicates: u64, seed: u64) -> Result<Self> {
        let cfg = PuSimConfig { model, s, replicates, seed, parallelism: Parallelism::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let (m, n) = split_counts(self.s, self.model.eta);
        if m < 1 || n < 1 {
            return Err(Error::config(format!(
                "S = {} with eta = {} leaves m = {m} red and n = {n} green strategies; both must be >= 1",
                self.s, self.model.eta
            )));
        }
        if self.replicates < 2 {
            return Err(Error::config("at least 2 replicates are required"));
        }
        Ok(())
    }

    /// Red and green counts `(m, n)` with `m = round(ηS)`.
    pub fn counts(&self) -> (u64, u64) {
        split_counts(self.s, self.model.eta)
    }
}

pub(crate) fn split_counts(s: u64, eta: f64) -> (u64, u64) {
    let m = (eta * s as f64).round() as u64;
    (m, s.saturating_sub(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PuMethod {
    Antithetic,
    /// Inversion estimator without the antithetic partner; for comparison.
    Plain,
    Direct,
}

/// Odds ratio, or a one-sided bound when the estimate sits on 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum OddsRatio {
    Exact(f64),
    /// `p_U` estimated as 1: the ratio exceeds the value at `p = 1 - 1/R`.
    AtLeast(f64),
    /// `p_U` estimated as 0: the ratio is below the value at `p = 1/R`.
    AtMost(f64),
}

impl OddsRatio {
    pub fn from_estimate(p: f64, eta: f64, replicates: u64) -> Result<Self> {
        let r = replicates as f64;
        if p >= 1.0 {
            Ok(OddsRatio::AtLeast(odds_ratio(1.0 - 1.0 / r, eta)?))
        } else if p <= 0.0 {
            Ok(OddsRatio::AtMost(odds_ratio(1.0 / r, eta)?))
        } else {
            odds_ratio(p, eta).map(OddsRatio::Exact)
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            OddsRatio::Exact(v) | OddsRatio::AtLeast(v) | OddsRatio::AtMost(v) => v,
        }
    }

    pub fn bound_label(&self) -> &'static str {
        match self {
            OddsRatio::Exact(_) => "exact",
            OddsRatio::AtLeast(_) => "lower_bound",
            OddsRatio::AtMost(_) => "upper_bound",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuEstimate {
    pub p_u: f64,
    pub upsilon: OddsRatio,
    pub std_error: f64,
    pub method: PuMethod,
    pub m: u64,
    pub n: u64,
    pub replicates: u64,
}

impl PuEstimate {
    fn new(stats: MeanVar, cfg: &PuSimConfig, method: PuMethod) -> Result<Self> {
        let (m, n) = cfg.counts();
        let p_u = stats.mean().clamp(0.0, 1.0);
        Ok(PuEstimate {
            p_u,
            upsilon: OddsRatio::from_estimate(p_u, cfg.model.eta, stats.count())?,
            std_error: stats.std_error(),
            method,
            m,
            n,
            replicates: stats.count(),
        })
    }
}

/// `F(Δ + (1+γ) M*)^n` for the red maximum at upper-tail level `q`.
#[inline]
fn green_below(model: &RedGreenModel, n: f64, q: f64) -> f64 {
    let x = model.red_return(model.base.isf(q));
    (n * model.base.log_cdf(x)).exp()
}

/// Upper-tail probability of `U^{1/m}` given `ln U`.
#[inline]
fn max_tail_level(ln_u: f64, m: f64) -> f64 {
    -(ln_u / m).exp_m1()
}

fn run_batches<F>(cfg: &PuSimConfig, per_replicate: F) -> Result<MeanVar>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let key = StreamKey::root(cfg.seed);
    let batches = cfg.replicates.div_ceil(BATCH);
    let parts = cfg.parallelism.map(batches as usize, |b| {
        let b = b as u64;
        let len = BATCH.min(cfg.replicates - b * BATCH);
        let mut rng = key.child(b).rng();
        let mut acc = MeanVar::default();
        for _ in 0..len {
            acc.push(per_replicate(&mut rng));
        }
        acc
    });
    let mut total = MeanVar::default();
    for part in &parts {
        total.merge(part);
    }
    if !total.mean().is_finite() || !total.variance().is_finite() {
        return Err(Error::Numeric(format!(
            "non-finite Monte Carlo average for {:?} at S = {}",
            cfg.model.base, cfg.s
        )));
    }
    Ok(total)
}

/// Antithetic inversion estimator of `p_U`.
pub fn pu_antithetic(cfg: &PuSimConfig) -> Result<PuEstimate> {
    cfg.validate()?;
    let (m, n) = cfg.counts();
    let (m, n) = (m as f64, n as f64);
    let model = cfg.model;
    let stats = run_batches(cfg, |rng| {
        let u: f64 = rng.sample(Open01);
        let p1 = green_below(&model, n, max_tail_level(u.ln(), m));
        let p2 = green_below(&model, n, max_tail_level((-u).ln_1p(), m));
        0.5 * (p1 + p2)
    })?;
    PuEstimate::new(stats, cfg, PuMethod::Antithetic)
}

/// The same inversion estimator without antithetic pairing.
pub fn pu_plain(cfg: &PuSimConfig) -> Result<PuEstimate> {
    cfg.validate()?;
    let (m, n) = cfg.counts();
    let (m, n) = (m as f64, n as f64);
    let model = cfg.model;
    let stats = run_batches(cfg, |rng| {
        let u: f64 = rng.sample(Open01);
        green_below(&model, n, max_tail_level(u.ln(), m))
    })?;
    PuEstimate::new(stats, cfg, PuMethod::Plain)
}

/// Draws base variates with `rand_distr`'s own samplers, so the oracle
/// shares no code with the inversion path.
enum BaseSampler {
    Gaussian,
    Lognormal(LogNormal<f64>),
    Exponential,
    Pareto(Pareto<f64>),
    StudentT(StudentT<f64>),
}

impl BaseSampler {
    fn new(d: ReturnDistribution) -> Result<Self> {
        let bad = |e: &dyn std::fmt::Display| Error::domain(format!("invalid sampler parameters: {e}"));
        Ok(match d {
            ReturnDistribution::Gaussian => BaseSampler::Gaussian,
            ReturnDistribution::Lognormal => BaseSampler::Lognormal(LogNormal::new(0.0, 1.0).map_err(|e| bad(&e))?),
            ReturnDistribution::Exponential => BaseSampler::Exponential,
            ReturnDistribution::Pareto { nu } => BaseSampler::Pareto(Pareto::new(1.0, nu).map_err(|e| bad(&e))?),
            ReturnDistribution::StudentT { nu } => BaseSampler::StudentT(StudentT::new(nu).map_err(|e| bad(&e))?),
        })
    }

    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            BaseSampler::Gaussian => StandardNormal.sample(rng),
            BaseSampler::Lognormal(d) => d.sample(rng),
            BaseSampler::Exponential => Exp1.sample(rng),
            BaseSampler::Pareto(d) => d.sample(rng),
            BaseSampler::StudentT(d) => d.sample(rng),
        }
    }
}

/// Brute-force estimate: simulate all `S` returns per replicate and record
/// whether the best one is red.
pub fn pu_direct(cfg: &PuSimConfig, replicates: u64) -> Result<PuEstimate> {
    let cfg = PuSimConfig { replicates, ..*cfg };
    cfg.validate()?;
    let (m, n) = cfg.counts();
    let sampler = BaseSampler::new(cfg.model.base)?;
    let model = cfg.model;
    let stats = run_batches(&cfg, |rng| {
        let red = (0..m).map(|_| model.red_return(sampler.draw(rng))).fold(f64::NEG_INFINITY, f64::max);
        let green = (0..n).map(|_| sampler.draw(rng)).fold(f64::NEG_INFINITY, f64::max);
        if red > green {
            1.0
        } else {
            0.0
        }
    })?;
    PuEstimate::new(stats, &cfg, PuMethod::Direct)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub s: u64,
    pub estimate: PuEstimate,
}

/// Antithetic estimates over a grid of strategy-space sizes.
///
/// Every grid point reuses the same seed (common random numbers), which
/// keeps the curve smooth in `S`.
pub fn pu_sweep(
    model: &RedGreenModel,
    s_grid: &[u64],
    replicates: u64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<SweepPoint>> {
    if s_grid.is_empty() {
        return Err(Error::config("S grid is empty"));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("S grid must be strictly ascending"));
    }
    s_grid
        .iter()
        .map(|&s| {
            let cfg = PuSimConfig::new(*model, s, replicates, seed)?.with_parallelism(parallelism);
            Ok(SweepPoint { s, estimate: pu_antithetic(&cfg)? })
        })
        .collect()
}
