//! The strong-law probability schedule.
//!
//! For `c > 0` the event `sup_{j>=n} M_j/sqrt(2 ln j) <= sqrt(1 + c L2(n)/ln n)`
//! has probability `exp(-(1+o(1)) (ln n)^{3/2-c} / (sqrt2 c L2(n)))`: summable
//! along geometric subsequences `n = rho^k` exactly when `c < 3/2`, which is
//! what feeds the Borel-Cantelli argument.

use crate::excursion::Sided;

use super::schedule::LogIndex;
use super::tail::TailSupLaw;
use super::AsymptoticsError;

/// One evaluation of the strong-law schedule.
#[derive(Debug, Clone)]
pub struct StrongLawPoint {
    /// The threshold `sqrt(1 + c L2/ln n)`.
    pub threshold: f64,
    /// Exact probability `P{sup <= threshold}`.
    pub probability: f64,
    /// Exact exponent `-ln P`.
    pub exact_exponent: f64,
    /// The asymptotic exponent `(ln n)^{3/2-c} / (sqrt2 c L2(n))`, the
    /// closed form consistent with the product-law chain.
    pub asymptotic_exponent: f64,
    /// `exact_exponent / asymptotic_exponent`.
    pub exponent_ratio: f64,
}

/// Evaluates the one-sided schedule at `(n, c)`.
pub fn strong_law_prob(index: LogIndex, c: f64) -> Result<StrongLawPoint, AsymptoticsError> {
    if !(c > 0.0) {
        return Err(AsymptoticsError::DomainError {
            what: "strong-law constant c must be positive",
        });
    }
    let ln_n = index.ln_n();
    let l2 = index.l2();
    let threshold = (1.0 + c * l2 / ln_n).sqrt();
    let law = TailSupLaw::ou(index, Sided::One);
    let exponent = law.tail_exponent(threshold)?;
    let exact_exponent = exponent.value.to_value();
    let asymptotic_exponent = ln_n.powf(1.5 - c) / (std::f64::consts::SQRT_2 * c * l2);
    Ok(StrongLawPoint {
        threshold,
        probability: (-exact_exponent).exp(),
        exact_exponent,
        asymptotic_exponent,
        exponent_ratio: exact_exponent / asymptotic_exponent,
    })
}

/// The schedule along `n = rho^k`, `k = k_min ..= k_max`, with running
/// partial sums of the probabilities.
pub fn strong_law_schedule(
    rho: f64,
    c: f64,
    k_min: u32,
    k_max: u32,
) -> Result<Vec<(u32, StrongLawPoint, f64)>, AsymptoticsError> {
    if !(rho > 1.0) {
        return Err(AsymptoticsError::DomainError {
            what: "geometric base rho must exceed 1",
        });
    }
    let mut rows = Vec::new();
    let mut partial = 0.0;
    for k in k_min..=k_max {
        let ln_n = k as f64 * rho.ln();
        let index = LogIndex::from_ln(ln_n)?;
        let point = strong_law_prob(index, c)?;
        partial += point.probability;
        rows.push((k, point, partial));
    }
    Ok(rows)
}
