//! Base return laws.
//!
//! Every law exposes both tails accurately: `cdf`/`log_cdf` for the lower
//! side and `sf`/`isf` (survival and inverse survival) for the upper side.
//! Monte Carlo code works with upper-tail probabilities directly so that
//! `F(x)^n` stays computable for `n` up to ~10⁹.

use std::f64::consts::{PI, SQRT_2};

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rng::StreamKey;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReturnDistribution {
    /// Standard normal.
    Gaussian,
    /// `exp(Z)` with `Z` standard normal.
    Lognormal,
    /// Unit-rate exponential.
    Exponential,
    /// `F(x) = 1 - x^(-nu)` on `x > 1`.
    Pareto { nu: f64 },
    /// Student t with `nu` degrees of freedom.
    StudentT { nu: f64 },
}

/// Location/scale sequences `(b_n, a_n)` and the GEV shape `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizingConstants {
    pub a_n: f64,
    pub b_n: f64,
    pub xi: f64,
}

impl ReturnDistribution {
    pub fn pareto(nu: f64) -> Result<Self> {
        let d = ReturnDistribution::Pareto { nu };
        d.validate()?;
        Ok(d)
    }

    pub fn student_t(nu: f64) -> Result<Self> {
        let d = ReturnDistribution::StudentT { nu };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ReturnDistribution::Pareto { nu } | ReturnDistribution::StudentT { nu } => {
                if nu.is_finite() && nu > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("tail parameter nu must be positive, got {nu}")))
                }
            }
            _ => Ok(()),
        }
    }

    /// Tail parameter `nu` for the Pareto-type laws.
    pub fn nu(&self) -> Option<f64> {
        match *self {
            ReturnDistribution::Pareto { nu } | ReturnDistribution::StudentT { nu } => Some(nu),
            _ => None,
        }
    }

    /// GEV tail index of the maximum: 0 for the light-tailed laws, `1/nu` otherwise.
    pub fn tail_index(&self) -> f64 {
        self.nu().map_or(0.0, |nu| 1.0 / nu)
    }

    /// Short, stable name used in file output.
    pub fn label(&self) -> String {
        match *self {
            ReturnDistribution::Gaussian => "normal".into(),
            ReturnDistribution::Lognormal => "lognormal".into(),
            ReturnDistribution::Exponential => "exponential".into(),
            ReturnDistribution::Pareto { nu } => format!("pareto{nu}"),
            ReturnDistribution::StudentT { nu } => format!("t{nu}"),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            ReturnDistribution::Gaussian => norm_cdf(x),
            ReturnDistribution::Lognormal => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_cdf(x.ln())
                }
            }
            ReturnDistribution::Exponential => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            ReturnDistribution::Pareto { nu } => {
                if x <= 1.0 {
                    0.0
                } else {
                    -(-nu * x.ln()).exp_m1()
                }
            }
            ReturnDistribution::StudentT { nu } => {
                if x >= 0.0 {
                    1.0 - t_sf(x, nu)
                } else {
                    t_sf(-x, nu)
                }
            }
        }
    }

    /// Survival function `1 - F(x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            ReturnDistribution::Gaussian => norm_sf(x),
            ReturnDistribution::Lognormal => {
                if x <= 0.0 {
                    1.0
                } else {
                    norm_sf(x.ln())
                }
            }
            ReturnDistribution::Exponential => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x).exp()
                }
            }
            ReturnDistribution::Pareto { nu } => {
                if x <= 1.0 {
                    1.0
                } else {
                    (-nu * x.ln()).exp()
                }
            }
            ReturnDistribution::StudentT { nu } => {
                if x >= 0.0 {
                    t_sf(x, nu)
                } else {
                    1.0 - t_sf(-x, nu)
                }
            }
        }
    }

    /// `ln F(x)`, using `ln(1 - sf)` in the upper half to keep precision.
    pub fn log_cdf(&self, x: f64) -> f64 {
        let sf = self.sf(x);
        if sf < 0.5 {
            (-sf).ln_1p()
        } else {
            self.cdf(x).ln()
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            ReturnDistribution::Gaussian => norm_pdf(x),
            ReturnDistribution::Lognormal => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_pdf(x.ln()) / x
                }
            }
            ReturnDistribution::Exponential => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x).exp()
                }
            }
            ReturnDistribution::Pareto { nu } => {
                if x <= 1.0 {
                    0.0
                } else {
                    nu * (-(nu + 1.0) * x.ln()).exp()
                }
            }
            ReturnDistribution::StudentT { nu } => t_pdf(x, nu),
        }
    }

    /// Inverse CDF `F⁻¹(p)` for `p ∈ (0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("quantile probability must lie in (0,1), got {p}")));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        match *self {
            ReturnDistribution::Gaussian => norm_quantile(p),
            ReturnDistribution::Lognormal => norm_quantile(p).exp(),
            ReturnDistribution::Exponential => -(-p).ln_1p(),
            ReturnDistribution::Pareto { nu } => (-(-p).ln_1p() / nu).exp(),
            ReturnDistribution::StudentT { nu } => {
                if p > 0.5 {
                    t_isf(1.0 - p, nu)
                } else {
                    -t_isf(p, nu)
                }
            }
        }
    }

    /// Inverse survival function: the `x` with `sf(x) = q`, for `q ∈ (0, 1)`.
    ///
    /// Takes the upper-tail probability itself so that levels like
    /// `1 - 10⁻¹²` never have to be represented.
    pub fn isf(&self, q: f64) -> f64 {
        match *self {
            ReturnDistribution::Gaussian => norm_isf(q),
            ReturnDistribution::Lognormal => norm_isf(q).exp(),
            ReturnDistribution::Exponential => -q.ln(),
            ReturnDistribution::Pareto { nu } => (-q.ln() / nu).exp(),
            ReturnDistribution::StudentT { nu } => {
                if q <= 0.5 {
                    t_isf(q, nu)
                } else {
                    -t_isf(1.0 - q, nu)
                }
            }
        }
    }

    pub fn support_lower(&self) -> f64 {
        match *self {
            ReturnDistribution::Gaussian | ReturnDistribution::StudentT { .. } => f64::NEG_INFINITY,
            ReturnDistribution::Lognormal | ReturnDistribution::Exponential => 0.0,
            ReturnDistribution::Pareto { .. } => 1.0,
        }
    }

    /// `r(x) = (1 - F(x)) / f(x)`.
    pub fn reciprocal_hazard(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= self.support_lower() {
            return Err(Error::domain(format!("x = {x} is outside the interior of the support")));
        }
        let f = self.pdf(x);
        if f <= 0.0 || !f.is_finite() {
            return Err(Error::domain(format!("density vanishes at x = {x}")));
        }
        Ok(self.sf(x) / f)
    }

    /// Normalising constants for the maximum of `n` draws.
    ///
    /// Gaussian, lognormal, exponential and Pareto use the classical closed
    /// forms; Student t uses `b_n = F⁻¹(1 - 1/n)`, `a_n = r(b_n)`. `n` may be
    /// fractional (as for `m = ηS`) but must be at least 2.
    pub fn normalizing_constants(&self, n: f64) -> Result<NormalizingConstants> {
        self.validate()?;
        if !(n.is_finite() && n >= 2.0) {
            return Err(Error::domain(format!("normalizing constants need n >= 2, got {n}")));
        }
        let xi = self.tail_index();
        let (b_n, a_n) = match *self {
            ReturnDistribution::Gaussian => {
                let b = (2.0 * n.ln()).sqrt();
                (b, 1.0 / b)
            }
            ReturnDistribution::Lognormal => {
                let r = (2.0 * n.ln()).sqrt();
                let b = r.exp();
                (b, b / r)
            }
            ReturnDistribution::Exponential => (n.ln(), 1.0),
            ReturnDistribution::Pareto { nu } => {
                let b = n.powf(1.0 / nu);
                (b, b / nu)
            }
            ReturnDistribution::StudentT { .. } => {
                let b = self.isf(1.0 / n);
                (b, self.reciprocal_hazard(b)?)
            }
        };
        Ok(NormalizingConstants { a_n, b_n, xi })
    }

    /// `n` independent draws by inversion, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        let mut rng = StreamKey::root(seed).rng();
        Ok((0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.quantile_unchecked(u)
            })
            .collect())
    }
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

fn norm_isf(q: f64) -> f64 {
    SQRT_2 * erfc_inv(2.0 * q)
}

fn norm_quantile(p: f64) -> f64 {
    if p < 0.5 {
        -norm_isf(p)
    } else {
        norm_isf(1.0 - p)
    }
}

fn t_log_norm_const(nu: f64) -> f64 {
    ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln()
}

fn t_pdf(x: f64, nu: f64) -> f64 {
    (t_log_norm_const(nu) - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()).exp()
}

/// Upper tail of Student t for `t >= 0`.
fn t_sf(t: f64, nu: f64) -> f64 {
    debug_assert!(t >= 0.0);
    let t2 = t * t;
    if !t2.is_finite() {
        return 0.0;
    }
    let x = nu / (nu + t2);
    if x < 0.5 {
        0.5 * beta_reg(0.5 * nu, 0.5, x)
    } else {
        // complementary form keeps accuracy for small |t|
        0.5 - 0.5 * beta_reg(0.5, 0.5 * nu, t2 / (nu + t2))
    }
}

/// Inverse upper tail of Student t for `q ∈ (0, 1/2]`.
///
/// Safeguarded Newton on `ln sf(t) = ln q`. The bracket's upper end comes
/// from the power-law bound `sf(t) <= K nu^((nu-1)/2) t^(-nu)`, where `K` is
/// the density's normalising constant; solving it for `q` over-shoots the root.
fn t_isf(q: f64, nu: f64) -> f64 {
    if q >= 0.5 {
        return 0.0;
    }
    if q <= 0.0 {
        return f64::INFINITY;
    }
    let log_k = t_log_norm_const(nu);
    let ln_q = q.ln();
    let tail = ((log_k + 0.5 * (nu - 1.0) * nu.ln() - ln_q) / nu).exp();
    let mut lo = 0.0_f64;
    let mut hi = if tail.is_finite() { tail.max(1e-300) } else { f64::MAX };

    // Cornish-Fisher start, clipped into the bracket
    let z = norm_isf(q);
    let cf = z + (z.powi(3) + z) / (4.0 * nu) + (5.0 * z.powi(5) + 16.0 * z.powi(3) + 3.0 * z) / (96.0 * nu * nu);
    let mut t = if cf.is_finite() && cf > lo && cf < hi { cf } else { 0.5 * (lo + hi) };

    for _ in 0..200 {
        let sf = t_sf(t, nu);
        let g = sf.ln() - ln_q;
        if g > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let dg = -t_pdf(t, nu) / sf;
        let mut next = t - g / dg;
        if !(next.is_finite() && next > lo && next < hi) {
            next = if hi == f64::MAX { 2.0 * lo.max(1.0) } else { 0.5 * (lo + hi) };
        }
        if (next - t).abs() <= 1e-14 * t.abs().max(1e-300) || hi - lo <= 1e-15 * hi {
            return next;
        }
        t = next;
    }
    t
}
