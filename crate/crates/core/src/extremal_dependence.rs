//! Rank-based extremal dependence: `χ(u)` and the lag-k extremogram.
//!
//! `χ(u)` is estimated from normalised ranks as the number of pairs with both
//! coordinates above `u` divided by the mean number of marginal exceedances.
//! With exactly `n(1-u)` exceedances per margin this is the usual
//! `(1 - 2u + Ĉ(u,u)) / (1 - u)`; the symmetric denominator keeps the
//! estimate at exactly 1 for identical margins when ties shift the counts.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::rng::StreamKey;

pub const DEFAULT_LEVEL: f64 = 0.95;
pub const DEFAULT_DELTA: f64 = 0.1;
/// Smallest number of pairs accepted by [`chi_at_level`].
pub const MIN_PAIRS: usize = 50;
/// Lags with fewer contributing pairs carry a warning.
pub const FEW_PAIRS: usize = 500;
pub const BOOTSTRAP_RESAMPLES: usize = 500;
/// Mean block length of the stationary bootstrap, in grid steps.
pub const MEAN_BLOCK: f64 = 10.0;

/// Level, lag range and bootstrap settings for an extremogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremogramConfig {
    pub u: f64,
    pub max_lag: usize,
    pub resamples: usize,
    /// Mean block length of the stationary bootstrap, in grid steps.
    pub mean_block: f64,
    pub seed: u64,
}

impl ExtremogramConfig {
    pub fn new(u: f64, max_lag: usize, seed: u64) -> Self {
        ExtremogramConfig { u, max_lag, resamples: BOOTSTRAP_RESAMPLES, mean_block: MEAN_BLOCK, seed }
    }

    fn validate(&self) -> Result<()> {
        check_level(self.u)?;
        if self.resamples < 40 {
            return Err(Error::config(format!("need at least 40 bootstrap resamples, got {}", self.resamples)));
        }
        if !(self.mean_block >= 1.0 && self.mean_block.is_finite()) {
            return Err(Error::config(format!("mean block length must be >= 1, got {}", self.mean_block)));
        }
        Ok(())
    }
}

/// `χ` of independent margins at level `u`.
pub fn independence_baseline(u: f64) -> f64 {
    1.0 - u
}

fn check_level(u: f64) -> Result<()> {
    if !(u > 0.5 && u < 1.0) {
        return Err(Error::domain(format!("level u must lie in (0.5, 1), got {u}")));
    }
    Ok(())
}

/// Normalised ranks `R_i / (n + 1)`, averaging over ties.
pub fn normalized_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j share the average of ranks i+1..=j
        let r = 0.5 * (i + 1 + j) as f64 / (n + 1) as f64;
        for &o in &order[i..j] {
            ranks[o] = r;
        }
        i = j;
    }
    ranks
}

fn exceedances(x: &[f64], u: f64) -> Vec<bool> {
    normalized_ranks(x).into_iter().map(|r| r > u).collect()
}

/// `χ` from fixed exceedance indicators, over the index stream `idx`.
fn chi_from_indicators(a: &[bool], b: &[bool], idx: impl Iterator<Item = usize>) -> Option<f64> {
    let (mut na, mut nb, mut joint) = (0u64, 0u64, 0u64);
    for i in idx {
        na += u64::from(a[i]);
        nb += u64::from(b[i]);
        joint += u64::from(a[i] && b[i]);
    }
    (na > 0 && nb > 0).then(|| 2.0 * joint as f64 / (na + nb) as f64)
}

fn chi_margins(x: &[f64], y: &[f64], u: f64) -> Result<(f64, Vec<bool>, Vec<bool>)> {
    let a = exceedances(x, u);
    let b = exceedances(y, u);
    let chi = chi_from_indicators(&a, &b, 0..a.len()).ok_or_else(|| {
        Error::Degenerate(format!("a margin has no exceedances of level {u}; is the series constant?"))
    })?;
    Ok((chi, a, b))
}

/// Rank-based estimate of `χ(u)` from paired observations.
pub fn chi_at_level(pairs: &[(f64, f64)], u: f64) -> Result<f64> {
    check_level(u)?;
    if pairs.len() < MIN_PAIRS {
        return Err(Error::InsufficientData(format!("need at least {MIN_PAIRS} pairs, got {}", pairs.len())));
    }
    if pairs.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::domain("pairs must be finite"));
    }
    let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok(chi_margins(&x, &y, u)?.0)
}

/// Piecewise-linear interpolation of iid Gaussian values at `0, 1, …, L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolatedProcess {
    knot_values: Vec<f64>,
    delta: f64,
}

impl InterpolatedProcess {
    pub fn new(knot_values: Vec<f64>, delta: f64) -> Result<Self> {
        if knot_values.len() < 2 {
            return Err(Error::InsufficientData("need at least two knots".into()));
        }
        if knot_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("knot values must be finite"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("grid spacing must be positive, got {delta}")));
        }
        Ok(InterpolatedProcess { knot_values, delta })
    }

    /// `knots` standard Gaussian values on `[0, knots - 1]`.
    pub fn simulate(knots: usize, delta: f64, seed: u64) -> Result<Self> {
        let mut rng = StreamKey::root(seed).child(0).rng();
        let values = (0..knots).map(|_| rng.sample(StandardNormal)).collect();
        InterpolatedProcess::new(values, delta)
    }

    pub fn knot_values(&self) -> &[f64] {
        &self.knot_values
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn domain_length(&self) -> f64 {
        (self.knot_values.len() - 1) as f64
    }

    /// `A(s)` for `s` in `[0, L]`.
    pub fn eval(&self, s: f64) -> f64 {
        let last = self.knot_values.len() - 1;
        let s = s.clamp(0.0, last as f64);
        let i = (s.floor() as usize).min(last - 1);
        let f = s - i as f64;
        (1.0 - f) * self.knot_values[i] + f * self.knot_values[i + 1]
    }

    /// Values on `start, start + δ, …` up to `L`.
    pub fn on_grid(&self, start: f64) -> Vec<f64> {
        let l = self.domain_length();
        (0..).map(|j| start + j as f64 * self.delta).take_while(|&s| s <= l).map(|s| self.eval(s)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremogramEstimate {
    pub u: f64,
    pub delta: f64,
    pub domain_length: f64,
    /// Distances `kδ`, starting at 0.
    pub lags: Vec<f64>,
    pub chi: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub n_pairs: Vec<usize>,
    pub warnings: Vec<String>,
}

impl ExtremogramEstimate {
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }
}

/// Evaluates `proc` on a grid with a random start in `[0, δ)` and estimates
/// the extremogram at lags `0..=max_lag`.
pub fn extremogram(
    proc: &InterpolatedProcess,
    cfg: &ExtremogramConfig,
    parallelism: Parallelism,
) -> Result<ExtremogramEstimate> {
    let max_lag = cfg.max_lag;
    let key = StreamKey::root(cfg.seed);
    // child 0 is taken by `simulate` when both share a seed
    let start = proc.delta * key.child(2).rng().sample::<f64, _>(Open01);
    let values = proc.on_grid(start);
    if max_lag as f64 * proc.delta >= proc.domain_length() / 2.0 {
        return Err(Error::config(format!(
            "max_lag * delta = {} must be below half the domain length {}",
            max_lag as f64 * proc.delta,
            proc.domain_length()
        )));
    }
    extremogram_keyed(&values, proc.delta, proc.domain_length(), cfg, key.child(1), parallelism)
}

/// Extremogram of an equally spaced series with spacing `delta`.
pub fn extremogram_series(
    values: &[f64],
    delta: f64,
    cfg: &ExtremogramConfig,
    parallelism: Parallelism,
) -> Result<ExtremogramEstimate> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("grid spacing must be positive, got {delta}")));
    }
    let length = values.len() as f64 * delta;
    extremogram_keyed(values, delta, length, cfg, StreamKey::root(cfg.seed).child(1), parallelism)
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn extremogram_keyed(
    values: &[f64],
    delta: f64,
    domain_length: f64,
    cfg: &ExtremogramConfig,
    key: StreamKey,
    parallelism: Parallelism,
) -> Result<ExtremogramEstimate> {
    cfg.validate()?;
    let (u, max_lag) = (cfg.u, cfg.max_lag);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("series values must be finite"));
    }
    let n = values.len();
    if max_lag == 0 || n < max_lag + MIN_PAIRS {
        return Err(Error::InsufficientData(format!(
            "need max_lag >= 1 and at least max_lag + {MIN_PAIRS} values, got max_lag = {max_lag} and {n} values"
        )));
    }

    let mut chi = vec![1.0];
    let mut indicators = Vec::with_capacity(max_lag);
    let mut warnings = Vec::new();
    for k in 1..=max_lag {
        let (c, a, b) = chi_margins(&values[..n - k], &values[k..], u)?;
        if n - k < FEW_PAIRS {
            warnings.push(format!("lag {k}: only {} pairs; the estimate is unreliable", n - k));
        }
        chi.push(c);
        indicators.push((a, b));
    }

    // one stationary-bootstrap index path per resample, shared by all lags
    let span = n - 1;
    let jump = 1.0 / cfg.mean_block;
    let boot: Vec<Vec<Option<f64>>> = parallelism.map(cfg.resamples, |r| {
        let mut rng = key.child(r as u64).rng();
        let mut path = Vec::with_capacity(span);
        let mut i = rng.random_range(0..span);
        for _ in 0..span {
            path.push(i);
            i = if rng.random::<f64>() < jump { rng.random_range(0..span) } else { (i + 1) % span };
        }
        indicators
            .iter()
            .map(|(a, b)| {
                let len = a.len();
                chi_from_indicators(a, b, path.iter().map(|&i| i % len))
            })
            .collect()
    });

    let (mut ci_low, mut ci_high) = (vec![1.0], vec![1.0]);
    for k in 0..max_lag {
        let mut draws: Vec<f64> = boot.iter().filter_map(|b| b[k]).collect();
        if draws.is_empty() {
            return Err(Error::Degenerate(format!("no usable bootstrap resample at lag {}", k + 1)));
        }
        draws.sort_by(f64::total_cmp);
        ci_low.push(percentile(&draws, 0.025));
        ci_high.push(percentile(&draws, 0.975));
    }

    Ok(ExtremogramEstimate {
        u,
        delta,
        domain_length,
        lags: (0..=max_lag).map(|k| k as f64 * delta).collect(),
        chi,
        ci_low,
        ci_high,
        n_pairs: (0..=max_lag).map(|k| n - k).collect(),
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCount {
    /// Lag index `k*` and distance `d* = k*δ`.
    pub lag_index: usize,
    pub distance: f64,
    /// `L / d*`.
    pub count: f64,
}

/// Smallest positive lag whose interval covers `baseline`, and the implied
/// number of independent extremes over the domain.
pub fn effective_independent_count(est: &ExtremogramEstimate, baseline: f64) -> Result<EffectiveCount> {
    (1..est.lags.len())
        .find(|&k| est.ci_low[k] <= baseline && baseline <= est.ci_high[k])
        .map(|k| EffectiveCount { lag_index: k, distance: est.lags[k], count: est.domain_length / est.lags[k] })
        .ok_or(Error::NoDecorrelation { max_lag: est.max_lag() })
}
