//! Extreme-value tools for measuring how strongly an optimiser that picks the
//! best-looking strategy amplifies the odds of choosing an unethical one.
//!
//! The crate covers four layers:
//!
//! * [`distributions`]: the five base return laws with tail-accurate CDF,
//!   survival, quantile and extreme-value normalising constants.
//! * [`asymptotics`]: closed-form large-strategy-space limits of the
//!   unethical odds ratio.
//! * [`monte_carlo`] and [`gpd_inference`]: finite-size estimation, both from
//!   a known model and from an audited top-k sample.
//! * [`extremal_dependence`]: rank-based χ(u) and the extremogram for
//!   correlated strategy spaces.
//!
//! [`experiments`] ties these together into reproducible batch runs.
//!
//! All randomness flows from a single `u64` seed through [`rng::StreamKey`],
//! so results do not depend on thread count or scheduling.

pub mod asymptotics;
pub mod distributions;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod extremal_dependence;
pub mod gpd_inference;
pub mod monte_carlo;
pub mod numeric;
pub mod rng;

pub use asymptotics::{LimitClassification, RedGreenModel, Regime};
pub use distributions::{NormalizingConstants, ReturnDistribution};
pub use error::{Error, Result};
pub use exec::Parallelism;
pub use gpd_inference::{GpdFit, Label, TopKSample};
pub use monte_carlo::{OddsRatio, PuEstimate, PuSimConfig};
