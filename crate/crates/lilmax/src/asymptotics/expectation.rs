//! Expectations: `E[U_n]` by quadrature of the exact law, and the four-term
//! expansion of `E[sup_{s>=t} B(s)/sqrt(2 s L2 s)]`.

use std::cell::Cell;

use crate::excursion::Sided;
use crate::specfun::{adaptive_simpson, EULER_GAMMA};

use super::schedule::{centering_constant, LogIndex, NormalizationSchedule};
use super::tail::TailSupLaw;
use super::AsymptoticsError;

/// `E[U_n] = int_0^inf (1 - F(x)) dx - int_0^inf F(-x) dx` with `F` the
/// exact CDF of `U_n`; absolute accuracy about `1e-6`.
///
/// The upper integrand decays like `c_n e^{-x}` (cut at 50 with remainder
/// below `1e-20`); the lower one vanishes identically beyond `x_n*` by the
/// zero branch, so that integral is proper.
pub fn expectation_u(index: LogIndex, sided: Sided) -> Result<f64, AsymptoticsError> {
    let law = TailSupLaw::ou(index, sided).with_tolerance(1e-7);
    let sched = NormalizationSchedule::new(index, 0.0, sided);

    let failure: Cell<Option<AsymptoticsError>> = Cell::new(None);
    let cdf = |x: f64| -> f64 {
        match law.u_cdf_exact(x) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };

    let upper = adaptive_simpson(|x| 1.0 - cdf(x), 0.0, 50.0, 2.5e-7);
    let lower = adaptive_simpson(|x| cdf(-x), 0.0, sched.x_star, 2.5e-7);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (upper, _) = upper?;
    let (lower, _) = lower?;
    Ok(upper - lower)
}

/// The expansion
/// `1 + (3/4) L3/L2 - (1/2) L4/L2 + (1/2)(gamma - ln(3/sqrt2))/L2`
/// for `E[sup_{s>=t} B(s)/sqrt(2 s L2 s)]`, evaluated at `ln t`.
///
/// Needs `L2(t) > 1` so the fourth iterated logarithm is defined.
pub fn expectation_expansion(index: LogIndex) -> Result<f64, AsymptoticsError> {
    let l2 = index.l2();
    if !(l2 > 1.0) {
        return Err(AsymptoticsError::DomainError {
            what: "expectation expansion needs ln ln t > 1 so L4 is defined",
        });
    }
    let l3 = l2.ln();
    let l4 = l3.ln();
    let k = centering_constant(Sided::One);
    Ok(1.0 + 0.75 * l3 / l2 - 0.5 * l4 / l2 + 0.5 * (EULER_GAMMA - k) / l2)
}

/// Re-centers the expansion the way `U_n` is centered:
/// `2 L2 (expansion - 1) - (3/2) L3 + L4 + ln(3/sqrt2)`, which equals
/// Euler's constant exactly, by construction of the expansion.
pub fn recentered_expansion(index: LogIndex) -> Result<f64, AsymptoticsError> {
    let l2 = index.l2();
    if !(l2 > 1.0) {
        return Err(AsymptoticsError::DomainError {
            what: "recentered expansion needs ln ln t > 1",
        });
    }
    let l3 = l2.ln();
    let l4 = l3.ln();
    let e = expectation_expansion(index)?;
    Ok(2.0 * l2 * (e - 1.0) - 1.5 * l3 + l4 + centering_constant(Sided::One))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recentered_expansion_is_euler_gamma_exactly() {
        for d in [4.0, 8.0, 64.0, 1024.0] {
            let idx = LogIndex::from_log10(d).unwrap();
            let v = recentered_expansion(idx).unwrap();
            assert!((v - EULER_GAMMA).abs() < 1e-12, "log10 t = {d}: {v}");
        }
    }

    #[test]
    fn expansion_direct_evaluation() {
        // L2 = 100: 1 + 0.75 L3/100 - 0.5 L4/100 + 0.5 (gamma - ln(3/sqrt2))/100.
        let idx = LogIndex::from_ln(100f64.exp()).unwrap();
        let l3 = 100f64.ln();
        let l4 = l3.ln();
        let expect = 1.0 + 0.75 * l3 / 100.0 - 0.5 * l4 / 100.0
            + 0.5 * (EULER_GAMMA - 0.752_038_698_388_137_2) / 100.0;
        let got = expectation_expansion(idx).unwrap();
        assert!((got - expect).abs() < 1e-14);
    }

    #[test]
    fn expansion_domain_error_when_l4_undefined() {
        // ln t = 2 -> L2 = ln 2 < 1.
        let idx = LogIndex::from_ln(2.0).unwrap();
        assert!(expectation_expansion(idx).is_err());
    }

    #[test]
    fn expectation_finite_and_above_gamma_at_moderate_index() {
        let idx = LogIndex::from_log10(4.0).unwrap();
        let e = expectation_u(idx, Sided::One).unwrap();
        assert!(e.is_finite());
        // Finite-n laws sit to the right of the Gumbel limit here.
        assert!(e > EULER_GAMMA && e < EULER_GAMMA + 1.5, "E[U] = {e}");
    }

    #[test]
    fn expectation_ladder_trends_toward_gamma() {
        let mut prev_gap = f64::INFINITY;
        for d in [4.0, 8.0, 16.0] {
            let idx = LogIndex::from_log10(d).unwrap();
            let e = expectation_u(idx, Sided::One).unwrap();
            let gap = (e - EULER_GAMMA).abs();
            assert!(gap < prev_gap, "10^{d}: E[U] = {e}");
            prev_gap = gap;
        }
    }
}
