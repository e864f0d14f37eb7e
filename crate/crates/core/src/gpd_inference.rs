//! Audit-side inference from the `k` best-scoring strategies.
//!
//! Red and green excesses over the threshold `u` are modelled as generalised
//! Pareto with a shared shape `ξ` and separate scales `τ_R`, `τ_G`. The fit
//! profiles the likelihood over `ξ`: for fixed `ξ` each scale solves the
//! monotone score equation `(1 + ξ) Σ x / (τ + ξ x) = k` exactly, so only a
//! one-dimensional search over `ξ` remains.

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_distr::Poisson;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::monte_carlo::BATCH;
use crate::numeric::{golden_max, MeanVar};
use crate::rng::StreamKey;

pub const XI_MIN: f64 = -0.49;
pub const XI_MAX: f64 = 2.0;
const XI_GRID_STEP: f64 = 0.05;
const XI_TOL: f64 = 1e-10;

/// Smallest top-k sample accepted for fitting.
pub const MIN_K: usize = 20;
/// Smallest red or green subsample accepted for the two-scale fit.
pub const MIN_PER_GROUP: usize = 5;

/// 95% quantile of the chi-squared law with one degree of freedom.
pub const CHI2_1_95: f64 = 3.841_458_820_694_124;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Red,
    Green,
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "red" => Ok(Label::Red),
            "green" => Ok(Label::Green),
            other => Err(Error::domain(format!("label must be 'red' or 'green', got '{other}'"))),
        }
    }
}

/// Threshold plus red and green excesses of the `k` largest audited returns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopKSample {
    u: f64,
    red_excesses: Vec<f64>,
    green_excesses: Vec<f64>,
}

impl TopKSample {
    /// Excesses must be finite and non-negative. Zero excesses only arise
    /// when a return ties with the threshold.
    pub fn new(u: f64, red_excesses: Vec<f64>, green_excesses: Vec<f64>) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::domain("threshold must be finite"));
        }
        if let Some(x) = red_excesses.iter().chain(&green_excesses).find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::domain(format!("excesses must be finite and >= 0, got {x}")));
        }
        if red_excesses.is_empty() && green_excesses.is_empty() {
            return Err(Error::InsufficientData("no excesses".into()));
        }
        Ok(TopKSample { u, red_excesses, green_excesses })
    }

    /// Builds the top-k sample from labelled returns.
    ///
    /// Returns are ranked in decreasing order; equal returns keep their input
    /// order, so ties at the threshold are broken deterministically. The
    /// threshold is the `(k+1)`-th largest return.
    pub fn from_returns(observations: &[(f64, Label)], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("k must be positive"));
        }
        if observations.len() < k + 1 {
            return Err(Error::InsufficientData(format!(
                "need at least k+1 = {} returns, got {}",
                k + 1,
                observations.len()
            )));
        }
        if let Some((x, _)) = observations.iter().find(|(x, _)| !x.is_finite()) {
            return Err(Error::domain(format!("returns must be finite, got {x}")));
        }
        let mut order: Vec<usize> = (0..observations.len()).collect();
        // stable sort: ties keep input order
        order.sort_by(|&a, &b| observations[b].0.total_cmp(&observations[a].0));
        let u = observations[order[k]].0;
        let mut red = Vec::new();
        let mut green = Vec::new();
        for &i in &order[..k] {
            let (x, label) = observations[i];
            match label {
                Label::Red => red.push(x - u),
                Label::Green => green.push(x - u),
            }
        }
        TopKSample::new(u, red, green)
    }

    pub fn threshold(&self) -> f64 {
        self.u
    }

    pub fn red_excesses(&self) -> &[f64] {
        &self.red_excesses
    }

    pub fn green_excesses(&self) -> &[f64] {
        &self.green_excesses
    }

    pub fn k(&self) -> usize {
        self.red_excesses.len() + self.green_excesses.len()
    }

    pub fn k_red(&self) -> usize {
        self.red_excesses.len()
    }

    pub fn k_green(&self) -> usize {
        self.green_excesses.len()
    }

    /// Empirical proportion of red among the top `k`.
    pub fn p_u_prime(&self) -> f64 {
        self.k_red() as f64 / self.k() as f64
    }

    /// Multiplies every excess by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        TopKSample {
            u: self.u * c,
            red_excesses: self.red_excesses.iter().map(|x| x * c).collect(),
            green_excesses: self.green_excesses.iter().map(|x| x * c).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpdFit {
    pub xi_hat: f64,
    pub tau_r_hat: f64,
    pub tau_g_hat: f64,
    pub loglik_full: f64,
    /// Shape and common scale under `τ_R = τ_G`.
    pub xi_null: f64,
    pub tau_null: f64,
    pub loglik_null: f64,
    pub lr_stat: f64,
    pub p_value: f64,
    /// The shape estimate sits on the lower edge of the search range, where
    /// likelihood asymptotics are unreliable.
    pub boundary_warning: bool,
}

impl GpdFit {
    /// Rejects `τ_R = τ_G` at the 5% level.
    pub fn rejects_equal_scales(&self) -> bool {
        self.lr_stat > CHI2_1_95
    }
}

/// GPD distribution function `1 - (1 + ξx/τ)^(-1/ξ)`, with the exponential
/// limit at `ξ = 0` and value 1 beyond the upper endpoint when `ξ < 0`.
pub fn gpd_cdf(xi: f64, tau: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -gpd_log_sf(xi, tau, x).exp_m1()
}

fn gpd_log_sf(xi: f64, tau: f64, x: f64) -> f64 {
    let z = x / tau;
    if xi.abs() < 1e-12 {
        return -z;
    }
    let t = xi * z;
    if t <= -1.0 {
        return f64::NEG_INFINITY;
    }
    -t.ln_1p() / xi
}

/// Summary of one group of excesses, enough for the score equation.
struct Group<'a> {
    x: &'a [f64],
    mean: f64,
    max: f64,
}

impl<'a> Group<'a> {
    fn new(x: &'a [f64]) -> Result<Self> {
        let max = x.iter().copied().fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::Degenerate("all excesses are zero".into()));
        }
        Ok(Group { x, mean: x.iter().sum::<f64>() / x.len() as f64, max })
    }

    fn k(&self) -> f64 {
        self.x.len() as f64
    }

    /// Score root in `τ` for fixed `ξ` (unique for `ξ > -1`).
    fn scale_mle(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            return self.mean;
        }
        let k = self.k();
        let h = |tau: f64| -> (f64, f64) {
            let mut s = 0.0;
            let mut ds = 0.0;
            for &x in self.x {
                let d = tau + xi * x;
                s += x / d;
                ds += x / (d * d);
            }
            ((1.0 + xi) * s - k, -(1.0 + xi) * ds)
        };
        let (mut lo, mut hi) = if xi > 0.0 {
            (((1.0 + xi) * self.mean - xi * self.max).max(1e-12 * self.mean), (1.0 + xi) * self.mean)
        } else {
            let pole = -xi * self.max;
            ((pole * (1.0 + 1e-12)).max((1.0 + xi) * self.mean), (1.0 + xi) * self.mean - xi * self.max)
        };
        if hi <= lo {
            return hi;
        }
        let mut tau = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (f, df) = h(tau);
            if f > 0.0 {
                lo = tau;
            } else {
                hi = tau;
            }
            let mut next = tau - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() <= 1e-14 * tau || hi - lo <= 1e-15 * hi {
                return next;
            }
            tau = next;
        }
        tau
    }

    fn loglik(&self, xi: f64, tau: f64) -> f64 {
        let k = self.k();
        if xi.abs() < 1e-12 {
            return -k * tau.ln() - self.x.iter().sum::<f64>() / tau;
        }
        let mut acc = 0.0;
        for &x in self.x {
            let t = xi * x / tau;
            if t <= -1.0 {
                return f64::NEG_INFINITY;
            }
            acc += t.ln_1p();
        }
        -k * tau.ln() - (1.0 + 1.0 / xi) * acc
    }

    /// Profile log-likelihood at `ξ` and the maximising scale.
    fn profile(&self, xi: f64) -> (f64, f64) {
        let tau = self.scale_mle(xi);
        (self.loglik(xi, tau), tau)
    }
}

/// Maximises a profile log-likelihood over `[XI_MIN, XI_MAX]`: coarse grid,
/// then golden-section refinement around the best grid point.
fn maximise_profile<F: Fn(f64) -> f64>(f: F) -> Result<(f64, f64)> {
    let steps = ((XI_MAX - XI_MIN) / XI_GRID_STEP).round() as usize;
    let (mut best_xi, mut best) = (f64::NAN, f64::NEG_INFINITY);
    for i in 0..=steps {
        let xi = XI_MIN + (XI_MAX - XI_MIN) * i as f64 / steps as f64;
        let v = f(xi);
        if v > best {
            best = v;
            best_xi = xi;
        }
    }
    if !best.is_finite() {
        return Err(Error::NonConvergence("profile log-likelihood is not finite anywhere on the shape grid".into()));
    }
    let lo = (best_xi - XI_GRID_STEP).max(XI_MIN);
    let hi = (best_xi + XI_GRID_STEP).min(XI_MAX);
    let (xi, v) = golden_max(
        |x| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        XI_TOL,
    );
    Ok(if v > best { (xi, v) } else { (best_xi, best) })
}

/// Shared-shape GPD fit with separate (full) and common (null) scales, and
/// the likelihood-ratio test of `τ_R = τ_G`.
pub fn fit_gpd_shared_shape(sample: &TopKSample) -> Result<GpdFit> {
    if sample.k() < MIN_K {
        return Err(Error::InsufficientData(format!("need k >= {MIN_K}, got {}", sample.k())));
    }
    if sample.k_red() < MIN_PER_GROUP || sample.k_green() < MIN_PER_GROUP {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_PER_GROUP} red and {MIN_PER_GROUP} green excesses, got {} and {}",
            sample.k_red(),
            sample.k_green()
        )));
    }
    let red = Group::new(&sample.red_excesses)?;
    let green = Group::new(&sample.green_excesses)?;
    let all_x: Vec<f64> = sample.red_excesses.iter().chain(&sample.green_excesses).copied().collect();
    let all = Group::new(&all_x)?;

    let full = |xi: f64| red.profile(xi).0 + green.profile(xi).0;
    let (xi_null, loglik_null) = maximise_profile(|xi| all.profile(xi).0)?;
    let (mut xi_hat, mut loglik_full) = maximise_profile(full)?;
    // the null is nested: the full profile at the null shape is a lower bound
    let at_null = full(xi_null);
    if at_null > loglik_full {
        xi_hat = xi_null;
        loglik_full = at_null;
    }

    let tau_r_hat = red.scale_mle(xi_hat);
    let tau_g_hat = green.scale_mle(xi_hat);
    let tau_null = all.scale_mle(xi_null);
    let lr_stat = (2.0 * (loglik_full - loglik_null)).max(0.0);
    let chi2 = ChiSquared::new(1.0).map_err(|e| Error::Numeric(e.to_string()))?;
    let p_value = chi2.sf(lr_stat);

    Ok(GpdFit {
        xi_hat,
        tau_r_hat,
        tau_g_hat,
        loglik_full,
        xi_null,
        tau_null,
        loglik_null,
        lr_stat,
        p_value,
        boundary_warning: xi_hat <= XI_MIN + 1e-6 || xi_null <= XI_MIN + 1e-6,
    })
}

/// Result of the GPD-based Monte Carlo estimate of `p_U`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpdPuEstimate {
    pub p_u_hat: f64,
    pub std_error: f64,
    /// Number of zero Poisson counts that were redrawn.
    pub zero_count_redraws: u64,
}

pub const MIN_GPD_REPLICATES: u64 = 10_000;

/// Monte Carlo estimate of `p_U` from a fitted shared-shape GPD.
///
/// The number of red exceedances is `N* ~ Poisson(k_R)` (zero counts are
/// redrawn), the red maximum is `M* = τ_R[(1 - U^{1/N*})^{-ξ} - 1]/ξ`, and
/// green exceedances form a Poisson process of rate `k_G`, giving
/// `Pr(M_G < M*) = exp{-k_G (1 - F_G(M*))}`.
pub fn estimate_pu_gpd(
    fit: &GpdFit,
    sample: &TopKSample,
    replicates: u64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<GpdPuEstimate> {
    estimate_pu_gpd_keyed(fit, sample, replicates, StreamKey::root(seed), parallelism)
}

pub(crate) fn estimate_pu_gpd_keyed(
    fit: &GpdFit,
    sample: &TopKSample,
    replicates: u64,
    key: StreamKey,
    parallelism: Parallelism,
) -> Result<GpdPuEstimate> {
    if replicates < MIN_GPD_REPLICATES {
        return Err(Error::config(format!("need at least {MIN_GPD_REPLICATES} replicates, got {replicates}")));
    }
    if !(fit.tau_r_hat > 0.0 && fit.tau_g_hat > 0.0 && fit.xi_hat.is_finite()) {
        return Err(Error::domain("fitted scales must be positive and the shape finite"));
    }
    if sample.k_red() == 0 {
        return Err(Error::InsufficientData("no red excesses".into()));
    }
    let poisson = Poisson::new(sample.k_red() as f64).map_err(|e| Error::domain(e.to_string()))?;
    let k_green = sample.k_green() as f64;
    let xi = fit.xi_hat;
    let ratio = fit.tau_r_hat / fit.tau_g_hat;
    let batches = replicates.div_ceil(BATCH);

    let parts = parallelism.map(batches as usize, |b| {
        let b = b as u64;
        let len = BATCH.min(replicates - b * BATCH);
        let mut rng = key.child(b).rng();
        let mut acc = MeanVar::default();
        let mut redraws = 0u64;
        for _ in 0..len {
            let u: f64 = rng.sample(Open01);
            let count = loop {
                let n: f64 = poisson.sample(&mut rng);
                if n >= 1.0 {
                    break n;
                }
                redraws += 1;
            };
            // w = 1 - U^{1/N*}
            let ln_w = (-(u.ln() / count).exp_m1()).ln();
            // green survival at M*, with (1 + ξ M*/τ_G) = 1 + ratio·(w^{-ξ} - 1)
            let log_sf = if xi.abs() < 1e-12 {
                ratio * ln_w
            } else {
                let t = ratio * (-xi * ln_w).exp_m1();
                if t <= -1.0 {
                    f64::NEG_INFINITY
                } else {
                    -t.ln_1p() / xi
                }
            };
            acc.push((-k_green * log_sf.exp()).exp());
        }
        (acc, redraws)
    });

    let mut total = MeanVar::default();
    let mut zero_count_redraws = 0;
    for (acc, r) in &parts {
        total.merge(acc);
        zero_count_redraws += r;
    }
    if !total.mean().is_finite() {
        return Err(Error::Numeric("non-finite GPD Monte Carlo average".into()));
    }
    Ok(GpdPuEstimate { p_u_hat: total.mean(), std_error: total.std_error(), zero_count_redraws })
}

/// Rough estimate of the red fraction `η` from the top-k red proportion and
/// an assumed odds ratio.
pub fn estimate_eta(p_u_k: f64, upsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_u_k) {
        return Err(Error::domain(format!("p_U must lie in [0,1], got {p_u_k}")));
    }
    if !(upsilon.is_finite() && upsilon > 0.0) {
        return Err(Error::domain(format!("odds ratio must be positive, got {upsilon}")));
    }
    if p_u_k == 0.0 {
        return Ok(0.0);
    }
    Ok(p_u_k / ((1.0 - p_u_k) * upsilon + p_u_k))
}

/// Everything an auditor can report from one top-k sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEstimates {
    pub p_u_prime: f64,
    pub p_u_hat: f64,
    pub eta_hat: f64,
}

impl AuditEstimates {
    /// `eta_hat` uses the empirical top-k proportion and the supplied odds ratio.
    pub fn new(sample: &TopKSample, pu: &GpdPuEstimate, upsilon: f64) -> Result<Self> {
        let p_u_prime = sample.p_u_prime();
        Ok(AuditEstimates { p_u_prime, p_u_hat: pu.p_u_hat, eta_hat: estimate_eta(p_u_prime, upsilon)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::pu_from_odds;

    fn gpd_draws(xi: f64, tau: f64, n: usize, rng: &mut impl Rng) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                if xi == 0.0 {
                    -tau * u.ln()
                } else {
                    tau * (u.powf(-xi) - 1.0) / xi
                }
            })
            .collect()
    }

    fn sample(xi: f64, tau_r: f64, tau_g: f64, k_r: usize, k_g: usize, seed: u64) -> TopKSample {
        let mut rng = StreamKey::root(seed).rng();
        let r = gpd_draws(xi, tau_r, k_r, &mut rng);
        let g = gpd_draws(xi, tau_g, k_g, &mut rng);
        TopKSample::new(0.0, r, g).unwrap()
    }

    #[test]
    fn gpd_cdf_examples() {
        assert_eq!(gpd_cdf(0.3, 1.0, 0.0), 0.0);
        assert!((gpd_cdf(0.0, 1.0, 2f64.ln()) - 0.5).abs() < 1e-15);
        assert!((gpd_cdf(0.5, 1.0, 2.0) - 0.75).abs() < 1e-15);
        assert_eq!(gpd_cdf(-0.5, 1.0, 2.5), 1.0);
        for x in [0.1, 1.0, 7.0] {
            assert!((gpd_cdf(1e-9, 2.0, x) - gpd_cdf(0.0, 2.0, x)).abs() < 1e-7);
        }
    }

    #[test]
    fn top_k_from_returns() {
        let obs: Vec<(f64, Label)> =
            (0..201).map(|i| (i as f64, if i % 3 == 0 { Label::Red } else { Label::Green })).collect();
        let s = TopKSample::from_returns(&obs, 200).unwrap();
        assert_eq!(s.threshold(), 0.0);
        assert_eq!(s.k(), 200);
        assert!(s.red_excesses().iter().chain(s.green_excesses()).all(|&x| x > 0.0));
        assert!(TopKSample::from_returns(&obs, 201).is_err());
    }

    #[test]
    fn ties_at_threshold_follow_input_order() {
        let obs = vec![(5.0, Label::Red), (3.0, Label::Green), (3.0, Label::Red), (1.0, Label::Green)];
        let s = TopKSample::from_returns(&obs, 2).unwrap();
        assert_eq!(s.threshold(), 3.0);
        assert_eq!(s.red_excesses(), &[2.0]);
        assert_eq!(s.green_excesses(), &[0.0]);
    }

    #[test]
    fn scale_score_root_maximises() {
        let s = sample(0.2, 1.5, 1.5, 40, 60, 3);
        let g = Group::new(s.red_excesses()).unwrap();
        for xi in [-0.4, -0.1, 0.0, 1e-9, 0.3, 1.5] {
            let tau = g.scale_mle(xi);
            let l = g.loglik(xi, tau);
            for f in [0.99, 1.01] {
                assert!(g.loglik(xi, tau * f) < l, "xi={xi}");
            }
        }
    }

    #[test]
    fn fit_rejects_small_groups() {
        let s = sample(0.1, 1.0, 1.0, 4, 100, 1);
        assert!(matches!(fit_gpd_shared_shape(&s), Err(Error::InsufficientData(_))));
        let s = sample(0.1, 1.0, 1.0, 6, 6, 1);
        assert!(matches!(fit_gpd_shared_shape(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn fit_invariants() {
        for seed in 0..20 {
            let s = sample(0.1, 2.0, 1.0, 60, 140, seed);
            let f = fit_gpd_shared_shape(&s).unwrap();
            assert!(f.loglik_full >= f.loglik_null - 1e-9);
            assert!(f.lr_stat >= 0.0 && (0.0..=1.0).contains(&f.p_value));
            assert!(f.tau_r_hat > 0.0 && f.tau_g_hat > 0.0);
            for (&x, tau) in s
                .red_excesses()
                .iter()
                .map(|x| (x, f.tau_r_hat))
                .chain(s.green_excesses().iter().map(|x| (x, f.tau_g_hat)))
            {
                assert!(1.0 + f.xi_hat * x / tau > 0.0);
            }
            assert!((f.lr_stat - 2.0 * (f.loglik_full - f.loglik_null)).abs() < 1e-6);
        }
    }

    #[test]
    fn fit_is_scale_equivariant() {
        let s = sample(0.25, 1.3, 0.8, 50, 150, 8);
        let f = fit_gpd_shared_shape(&s).unwrap();
        for c in [0.01, 3.0, 250.0] {
            let g = fit_gpd_shared_shape(&s.scaled(c)).unwrap();
            assert!((g.xi_hat - f.xi_hat).abs() < 1e-5);
            assert!((g.tau_r_hat / c - f.tau_r_hat).abs() < 1e-5 * f.tau_r_hat);
            assert!((g.tau_g_hat / c - f.tau_g_hat).abs() < 1e-5 * f.tau_g_hat);
            assert!((g.lr_stat - f.lr_stat).abs() < 1e-5);
        }
    }

    #[test]
    fn equal_tails_give_even_odds() {
        let s = sample(0.1, 1.0, 1.0, 100, 100, 4);
        let fit = GpdFit { xi_hat: 0.1, tau_r_hat: 1.0, tau_g_hat: 1.0, ..fit_gpd_shared_shape(&s).unwrap() };
        let e = estimate_pu_gpd(&fit, &s, 100_000, 7, Parallelism::Sequential).unwrap();
        assert!((e.p_u_hat - 0.5).abs() < 4.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn gpd_estimate_is_deterministic_and_parallel_invariant() {
        let s = sample(0.05, 1.4, 1.0, 40, 160, 2);
        let fit = fit_gpd_shared_shape(&s).unwrap();
        let a = estimate_pu_gpd(&fit, &s, 30_000, 1, Parallelism::Sequential).unwrap();
        let b = estimate_pu_gpd(&fit, &s, 30_000, 1, Parallelism::Rayon).unwrap();
        assert_eq!(a, b);
        assert!(estimate_pu_gpd(&fit, &s, 9_999, 1, Parallelism::Sequential).is_err());
    }

    #[test]
    fn eta_examples() {
        assert_eq!(estimate_eta(0.37, 1.0).unwrap(), 0.37);
        assert!((estimate_eta(0.345, 10.0).unwrap() - 0.05).abs() < 1e-3);
        assert_eq!(estimate_eta(0.0, 5.0).unwrap(), 0.0);
        assert!(estimate_eta(1.2, 5.0).is_err());
        for eta in [0.01, 0.1, 0.5] {
            for ups in [0.5, 1.0, 17.0] {
                let p = pu_from_odds(ups, eta).unwrap();
                assert!((estimate_eta(p, ups).unwrap() - eta).abs() < 1e-12);
            }
        }
    }
}
