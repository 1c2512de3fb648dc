//! The exact tail-supremum law, normalization sequences, Gumbel-limit
//! diagnostics, strong-law schedule, and expectation expansions.

mod expectation;
mod gumbel_limit;
mod schedule;
mod strong_law;
mod tail;

pub use expectation::{expectation_expansion, expectation_u, recentered_expansion};
pub use gumbel_limit::{
    gumbel_deviation, ks_to_gumbel, u_cdf_exact, u_cdf_paper, GridSpec, GumbelDeviation,
};
pub use schedule::{
    centering_constant, q_factor, LogIndex, NormalizationSchedule, LN_3_OVER_2_SQRT_2,
    LN_3_OVER_SQRT_2,
};
pub use strong_law::{strong_law_prob, strong_law_schedule, StrongLawPoint};
pub use tail::{CachedTailCdf, TailExponent, TailSupLaw};

use crate::specfun::SpecFunError;

/// Errors from the asymptotics layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymptoticsError {
    /// Start indices need `ln n > 1` so `L2(n)` is positive.
    #[error("invalid start index: ln n = {ln_n} (need ln n > 1)")]
    InvalidIndex { ln_n: f64 },
    /// The product-sum exponent diverges at thresholds `y <= 1`; the CDF is 0.
    #[error("tail exponent diverges at threshold y = {y} <= 1 (the CDF is zero there)")]
    ExponentDiverges { y: f64 },
    /// The requested truncation tolerance could not be certified.
    #[error("could not certify truncation tolerance: achieved {achieved:e}, required {required:e}")]
    CertificationFailed { achieved: f64, required: f64 },
    /// TailSupLaw supports only the closed-form OU base law.
    #[error("tail-supremum law requires the closed-form OU scale as its base")]
    UnsupportedBase,
    #[error("invalid evaluation grid")]
    InvalidGrid,
    #[error("domain error: {what}")]
    DomainError { what: &'static str },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}
