//! The Gumbel extreme-value distribution `L(x) = exp(-e^{-x})`.

use super::quad::adaptive_simpson;
use super::SpecFunError;

/// Euler's constant, the mean of the Gumbel law.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `L(x) = exp(-e^{-x})`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Gumbel density `e^{-x} L(x)`.
pub fn gumbel_pdf(x: f64) -> f64 {
    let e = (-x).exp();
    (-x - e).exp()
}

/// Inverse of [`gumbel_cdf`]: `-ln(-ln p)` on `0 < p < 1`.
pub fn gumbel_quantile(p: f64) -> Result<f64, SpecFunError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SpecFunError::DomainError {
            what: "gumbel quantile needs 0 < p < 1",
        });
    }
    Ok(-(-p.ln()).ln())
}

/// `int x dL(x)` by adaptive quadrature; converges to Euler's constant.
///
/// The integrand decays like `|x| e^{-e^{-x}}` on the left and `x e^{-x}` on
/// the right, so the window `[-7, 45]` leaves a remainder below `1e-12`.
pub fn gumbel_mean_by_quadrature() -> Result<f64, SpecFunError> {
    let (v, _) = adaptive_simpson(|x| x * gumbel_pdf(x), -7.0, 45.0, 1e-9)?;
    Ok(v)
}
