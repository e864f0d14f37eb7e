//! Large-strategy-space limits of the unethical odds ratio.
//!
//! Green returns are draws from a base law `F`; red returns are
//! `Δ + (1 + γ) Z` with `Z ~ F`. As the number of strategies grows, the
//! probability that the best strategy is red either tends to a finite limit
//! (fat tails, or no scale inflation for exponential-type tails) or to one.
//!
//! When red and green maxima have different tail indexes, the one with the
//! larger index dominates in the limit. That situation is outside the
//! location/scale model handled here.

use serde::{Deserialize, Serialize};

use crate::distributions::ReturnDistribution;
use crate::error::{Error, Result};

/// Base law plus the red advantage: fraction `eta` red, mean shift `delta`,
/// volatility inflation `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedGreenModel {
    pub base: ReturnDistribution,
    pub eta: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl RedGreenModel {
    pub fn new(base: ReturnDistribution, eta: f64, delta: f64, gamma: f64) -> Result<Self> {
        let model = RedGreenModel { base, eta, delta, gamma };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        check_eta(self.eta)?;
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::domain(format!("delta must be finite and >= 0, got {}", self.delta)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::domain(format!("gamma must be finite and >= 0, got {}", self.gamma)));
        }
        Ok(())
    }

    /// Maps a base draw to a red return.
    #[inline]
    pub fn red_return(&self, z: f64) -> f64 {
        self.delta + (1.0 + self.gamma) * z
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("eta must lie in (0,1), got {eta}")))
    }
}

/// Odds of picking red relative to the odds under uniform random choice.
pub fn odds_ratio(p_u: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(p_u > 0.0 && p_u < 1.0) {
        return Err(Error::domain(format!("p_U must lie in (0,1), got {p_u}")));
    }
    Ok((p_u / (1.0 - p_u)) / (eta / (1.0 - eta)))
}

/// Inverse of [`odds_ratio`] in `p_U`.
pub fn pu_from_odds(upsilon: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(upsilon.is_finite() && upsilon > 0.0) {
        return Err(Error::domain(format!("odds ratio must be positive, got {upsilon}")));
    }
    let w = upsilon * eta / (1.0 - eta);
    Ok(w / (1.0 + w))
}

/// Limits of `a_m / a_n` and `(b_m - b_n) / a_n` for `m/n = η/(1-η)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KhintchineConstants {
    pub alpha: f64,
    pub beta: f64,
}

pub fn khintchine_constants(eta: f64, xi: f64) -> Result<KhintchineConstants> {
    check_eta(eta)?;
    if !xi.is_finite() {
        return Err(Error::domain("xi must be finite"));
    }
    let log_odds = (eta / (1.0 - eta)).ln();
    let alpha = (xi * log_odds).exp();
    // expm1 keeps (w^xi - 1)/xi accurate for small |xi|; below 1e-8 the
    // two-term series is exact to rounding
    let beta = if xi.abs() < 1e-8 { log_odds * (1.0 + 0.5 * xi * log_odds) } else { (xi * log_odds).exp_m1() / xi };
    Ok(KhintchineConstants { alpha, beta })
}

/// Limiting odds ratio `(1 + γ)^ν` for Pareto-type tails.
pub fn upsilon_star(gamma: f64, nu: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::domain(format!("nu must be positive, got {nu}")));
    }
    Ok((1.0 + gamma).powf(nu))
}

/// Limiting `p_U` for Pareto-type tails; independent of `Δ`.
pub fn limiting_pu_pareto(eta: f64, gamma: f64, nu: f64) -> Result<f64> {
    check_eta(eta)?;
    let u = upsilon_star(gamma, nu)?;
    Ok(eta * u / (1.0 - eta + eta * u))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LimitValue {
    Finite(f64),
    Infinite,
}

/// `(Δ + γ b_m) / a_n` at a given `S` together with its `S → ∞` limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageLimit {
    pub at_s: f64,
    pub limit: LimitValue,
}

/// Red advantage term `A(Δ, γ, η)` in the limiting comparison
/// `β_η + A + (1+γ) α_η Y > X`.
pub fn advantage_limit(model: &RedGreenModel, s: f64) -> Result<AdvantageLimit> {
    model.validate()?;
    if !(s.is_finite() && s >= 10.0) {
        return Err(Error::domain(format!("strategy-space size must be >= 10, got {s}")));
    }
    let m = model.eta * s;
    let n = (1.0 - model.eta) * s;
    if m < 2.0 || n < 2.0 {
        return Err(Error::domain(format!("eta*S = {m} and (1-eta)*S = {n} must both be >= 2")));
    }
    let a_n = model.base.normalizing_constants(n)?.a_n;
    let b_m = model.base.normalizing_constants(m)?.b_n;
    let at_s = (model.delta + model.gamma * b_m) / a_n;

    let (delta, gamma) = (model.delta, model.gamma);
    let limit = match model.base {
        // a_n -> 0: any advantage diverges
        ReturnDistribution::Gaussian => {
            if delta > 0.0 || gamma > 0.0 {
                LimitValue::Infinite
            } else {
                LimitValue::Finite(0.0)
            }
        }
        // a_n -> infinity washes out delta; b_m/a_n -> infinity
        ReturnDistribution::Lognormal => {
            if gamma > 0.0 {
                LimitValue::Infinite
            } else {
                LimitValue::Finite(0.0)
            }
        }
        // a_n = 1, b_m = log(eta S)
        ReturnDistribution::Exponential => {
            if gamma > 0.0 {
                LimitValue::Infinite
            } else {
                LimitValue::Finite(delta)
            }
        }
        // b_m/a_m -> 1/xi = nu, a_m/a_n -> alpha, delta/a_n -> 0
        ReturnDistribution::Pareto { nu } | ReturnDistribution::StudentT { nu } => {
            let alpha = khintchine_constants(model.eta, 1.0 / nu)?.alpha;
            LimitValue::Finite(gamma * nu * alpha)
        }
    };
    Ok(AdvantageLimit { at_s, limit })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum Regime {
    /// `p_U` and `Υ` converge to finite values above the neutral ones.
    FiniteOdds { pu_limit: f64, upsilon_star: f64 },
    /// `p_U -> 1`, `Υ -> ∞`.
    RedDominates,
    /// `p_U -> η`, `Υ -> 1`.
    Neutral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitClassification {
    pub regime: Regime,
    pub reason: String,
}

pub fn classify_limit(model: &RedGreenModel) -> Result<LimitClassification> {
    model.validate()?;
    let (delta, gamma, eta) = (model.delta, model.gamma, model.eta);
    let neutral = |reason: &str| LimitClassification { regime: Regime::Neutral, reason: reason.into() };
    let dominates = |reason: &str| LimitClassification { regime: Regime::RedDominates, reason: reason.into() };
    let finite = |upsilon: f64, reason: &str| -> Result<LimitClassification> {
        Ok(LimitClassification {
            regime: Regime::FiniteOdds { pu_limit: pu_from_odds(upsilon, eta)?, upsilon_star: upsilon },
            reason: reason.into(),
        })
    };

    if delta == 0.0 && gamma == 0.0 {
        return Ok(neutral("red and green returns have the same law"));
    }
    match model.base {
        ReturnDistribution::Gaussian => {
            Ok(dominates("Gaussian maxima: xi = 0 and a_n -> 0, so any red advantage diverges"))
        }
        ReturnDistribution::Lognormal => {
            if gamma > 0.0 {
                Ok(dominates("lognormal maxima: b_m/a_n -> infinity, red wins through higher volatility"))
            } else {
                Ok(neutral("lognormal maxima: a_n -> infinity washes out a pure location shift"))
            }
        }
        ReturnDistribution::Exponential => {
            if gamma > 0.0 {
                Ok(dominates("exponential maxima: gamma log S -> infinity, red wins through higher volatility"))
            } else {
                // Gumbel limits: Pr(beta + delta + Y > X) gives odds exp(delta)
                finite(delta.exp(), "exponential maxima with gamma = 0: finite advantage delta, odds ratio exp(delta)")
            }
        }
        ReturnDistribution::Pareto { nu } | ReturnDistribution::StudentT { nu } => {
            if gamma == 0.0 {
                Ok(neutral("Pareto-type tails: a location shift vanishes relative to a_n"))
            } else {
                finite(upsilon_star(gamma, nu)?, "Pareto-type tails: Frechet limits give odds ratio (1+gamma)^nu")
            }
        }
    }
}
