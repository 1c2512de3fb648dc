//! Special functions: scale functions, the Gumbel law, incomplete gamma, and
//! log-domain arithmetic.
//!
//! Everything here is pure and reentrant.

mod gamma;
mod gumbel;
mod logreal;
pub(crate) mod quad;
mod scale;

pub use gamma::{upper_incomplete_gamma_3half, GAMMA_3_HALF};
pub use gumbel::{gumbel_cdf, gumbel_mean_by_quadrature, gumbel_pdf, gumbel_quantile, EULER_GAMMA};
pub use logreal::LogReal;
pub use quad::{adaptive_simpson, adaptive_simpson_ln, adaptive_simpson_rel};
pub use scale::{log_scale_ou, scale_general, scale_ou, CoefficientField, ScaleFunctionHandle};

pub(crate) use scale::{
    log_scale_ou_fast, ou_asymptotic_sum, scale_ou_log_derivative, scale_ou_series,
    OU_SERIES_SWITCH,
};

/// Errors from special-function evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    /// The plain-valued result exceeds `f64` range; use the log-domain
    /// variant instead. Carries the natural log of the value.
    #[error("result overflows plain f64 range (ln value = {ln_value}); use the log-domain variant")]
    Overflow { ln_value: f64 },
    /// Argument outside the operation's domain.
    #[error("domain error: {what}")]
    DomainError { what: &'static str },
    /// Adaptive quadrature failed to resolve the integrand (non-integrable
    /// blow-up or non-finite values).
    #[error("quadrature did not converge (integrand blow-up or non-finite values)")]
    QuadratureDivergence,
    /// A coefficient field's diffusion coefficient dropped below its
    /// declared lower bound.
    #[error("sigma fell below its declared lower bound near x = {at}")]
    SigmaBoundViolated { at: f64 },
}
