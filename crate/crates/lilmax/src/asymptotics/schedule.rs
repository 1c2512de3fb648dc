//! Start indices in log-space and the normalization sequences.

use super::AsymptoticsError;
use crate::excursion::Sided;

/// `ln(3/sqrt 2)`, the one-sided centering constant.
pub const LN_3_OVER_SQRT_2: f64 = 0.752_038_698_388_137_2;
/// `ln(3/(2 sqrt 2))`, the two-sided centering constant.
pub const LN_3_OVER_2_SQRT_2: f64 = 0.058_891_517_828_191_19;

/// The sided centering constant `ln K`.
pub fn centering_constant(sided: Sided) -> f64 {
    match sided {
        Sided::One => LN_3_OVER_SQRT_2,
        Sided::Two => LN_3_OVER_2_SQRT_2,
    }
}

/// A start index `n` carried as `ln n`, so that `n = 10^64` and far beyond
/// stay representable. Requires `ln n > 1` so the iterated logarithm
/// `L2(n) = ln ln n` is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIndex {
    ln_n: f64,
}

impl LogIndex {
    pub fn from_ln(ln_n: f64) -> Result<Self, AsymptoticsError> {
        if !ln_n.is_finite() || !(ln_n > 1.0) {
            return Err(AsymptoticsError::InvalidIndex { ln_n });
        }
        Ok(LogIndex { ln_n })
    }

    /// From an integer index; needs `n >= 3` so that `ln n > 1`.
    pub fn from_n(n: u64) -> Result<Self, AsymptoticsError> {
        LogIndex::from_ln((n as f64).ln())
    }

    /// From `log10 n`, convenient for ladders like `n = 10^64`.
    pub fn from_log10(d: f64) -> Result<Self, AsymptoticsError> {
        LogIndex::from_ln(d * std::f64::consts::LN_10)
    }

    pub fn ln_n(&self) -> f64 {
        self.ln_n
    }

    /// `L2(n) = ln ln n`, positive by the domain restriction.
    pub fn l2(&self) -> f64 {
        self.ln_n.ln()
    }

    /// `L3(n) = ln ln ln n`.
    pub fn l3(&self) -> f64 {
        self.l2().ln()
    }
}

/// The normalization sequences at a given `(n, x, sided)`:
///
/// ```text
/// phi_n(x) = (3/2) L2(n) - L3(n) - ln K + x        (beta_n is set to phi_n)
/// alpha_n  = beta_n / ln n
/// q_n(x)   = ((2 ln n + beta)/(2 ln n + beta/2)) exp(-beta^2/(4 ln n))
/// c_n(x)   = q_n(x) [1 + (x - L3 - ln K)/((3/2) L2)]^{-1}
/// x_n*     = (3/2) L2(n) - L3(n) - ln K            (solves phi_n(-x*) = 0)
/// ```
///
/// with `K = 3/sqrt 2` one-sided and `3/(2 sqrt 2)` two-sided.
#[derive(Debug, Clone, Copy)]
pub struct NormalizationSchedule {
    pub index: LogIndex,
    pub x: f64,
    pub sided: Sided,
    pub phi: f64,
    pub beta: f64,
    pub alpha: f64,
    pub q: f64,
    pub c: f64,
    pub x_star: f64,
}

impl NormalizationSchedule {
    pub fn new(index: LogIndex, x: f64, sided: Sided) -> Self {
        let ln_n = index.ln_n();
        let l2 = index.l2();
        let l3 = index.l3();
        let ln_k = centering_constant(sided);
        let x_star = 1.5 * l2 - l3 - ln_k;
        let phi = x_star + x;
        let beta = phi;
        let alpha = beta / ln_n;
        let q = q_factor(ln_n, beta);
        // bracket = 1 + (x - L3 - ln K)/((3/2) L2) = (x + x*)/((3/2) L2),
        // positive exactly on the non-degenerate branch phi > 0.
        let bracket = (x + x_star) / (1.5 * l2);
        let c = if phi > 0.0 { q / bracket } else { f64::NAN };
        NormalizationSchedule {
            index,
            x,
            sided,
            phi,
            beta,
            alpha,
            q,
            c,
            x_star,
        }
    }

    /// The product-law threshold `y = 1 + phi/(2 ln n)`.
    pub fn threshold(&self) -> f64 {
        1.0 + self.phi / (2.0 * self.index.ln_n())
    }
}

/// `q_n` for an arbitrary `beta_n` sequence value.
pub fn q_factor(ln_n: f64, beta: f64) -> f64 {
    ((2.0 * ln_n + beta) / (2.0 * ln_n + 0.5 * beta)) * (-beta * beta / (4.0 * ln_n)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_domain() {
        assert!(LogIndex::from_ln(1.0).is_err());
        assert!(LogIndex::from_ln(f64::NAN).is_err());
        assert!(LogIndex::from_n(2).is_err());
        assert!(LogIndex::from_n(3).is_ok());
        assert!((LogIndex::from_log10(4.0).unwrap().ln_n() - 4.0 * std::f64::consts::LN_10).abs() < 1e-15);
    }

    #[test]
    fn centering_constants() {
        assert!((LN_3_OVER_SQRT_2 - (3.0f64 / 2.0f64.sqrt()).ln()).abs() < 1e-15);
        assert!((LN_3_OVER_2_SQRT_2 - (3.0f64 / (2.0 * 2.0f64.sqrt())).ln()).abs() < 1e-15);
    }

    #[test]
    fn phi_at_minus_x_star_is_zero() {
        for d in [2.0, 4.0, 16.0, 64.0] {
            for sided in [Sided::One, Sided::Two] {
                let idx = LogIndex::from_log10(d).unwrap();
                let sched = NormalizationSchedule::new(idx, 0.0, sided);
                let at_star = NormalizationSchedule::new(idx, -sched.x_star, sided);
                assert_eq!(at_star.phi, 0.0, "log10 n = {d}");
                assert!(sched.x_star > 0.0);
            }
        }
    }

    #[test]
    fn alpha_is_beta_over_ln_n() {
        let idx = LogIndex::from_log10(8.0).unwrap();
        let s = NormalizationSchedule::new(idx, 1.3, Sided::One);
        assert_eq!(s.alpha, s.beta / idx.ln_n());
        assert_eq!(s.beta, s.phi);
    }

    #[test]
    fn q_and_c_factors_against_step_by_step_oracle() {
        // n = 10^8, x = 0: recompute every factor from the iterated logs.
        let idx = LogIndex::from_log10(8.0).unwrap();
        let s = NormalizationSchedule::new(idx, 0.0, Sided::One);
        let ln_n = 8.0 * std::f64::consts::LN_10;
        let l2 = ln_n.ln();
        let l3 = l2.ln();
        let phi = 1.5 * l2 - l3 - LN_3_OVER_SQRT_2;
        assert!((s.phi - phi).abs() < 1e-14);
        let ratio = (2.0 * ln_n + phi) / (2.0 * ln_n + phi / 2.0);
        let damp = (-phi * phi / (4.0 * ln_n)).exp();
        assert!((s.q - ratio * damp).abs() < 1e-14);
        let bracket = 1.0 + (0.0 - l3 - LN_3_OVER_SQRT_2) / (1.5 * l2);
        assert!((s.c - ratio * damp / bracket).abs() < 1e-12);
    }

    #[test]
    fn c_tends_to_one_along_ladder() {
        // c_n -> 1 at the iterated-logarithm rate L3/L2, so even n = 10^(4e9)
        // only brings it within ~0.13 of the limit.
        let mut prev_dev = f64::INFINITY;
        for d in [4.0, 16.0, 256.0, 65536.0, 4294967296.0] {
            let idx = LogIndex::from_log10(d).unwrap();
            let s = NormalizationSchedule::new(idx, 0.0, Sided::One);
            let dev = (s.c - 1.0).abs();
            assert!(dev < prev_dev, "log10 n = {d}: c = {}", s.c);
            prev_dev = dev;
        }
        assert!(prev_dev < 0.2, "final deviation {prev_dev}");
    }
}
