//! Signed log-domain reals.
//!
//! The tail machinery works with quantities like `exp(x^2/2)` at `x = 40` or
//! `j^{-(1+a/2)^2}` at `ln j = 1e6`, far outside the range of an `f64`. A
//! [`LogReal`] stores the natural log of the magnitude together with the
//! sign, so those quantities stay representable while all arithmetic keeps
//! ordinary floating-point cost.

/// A real number represented as `sign * exp(log_abs)`.
///
/// `sign == 0` means the value is exactly zero and `log_abs` is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    sign: i8,
    log_abs: f64,
}

impl LogReal {
    /// Exact zero.
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };

    /// A positive value given by the natural log of its magnitude.
    pub fn from_ln(log_abs: f64) -> Self {
        LogReal { sign: 1, log_abs }
    }

    /// Converts a finite `f64`, preserving exact zero.
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: if v > 0.0 { 1 } else { -1 },
                log_abs: v.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `None` for zero.
    pub fn ln_abs(&self) -> Option<f64> {
        (self.sign != 0).then_some(self.log_abs)
    }

    /// Back to a plain `f64`, saturating to `0.0` on underflow and
    /// `+-infinity` on overflow.
    pub fn to_value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn neg(&self) -> Self {
        LogReal {
            sign: -self.sign,
            log_abs: self.log_abs,
        }
    }

    pub fn mul(&self, other: &LogReal) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            sign: self.sign * other.sign,
            log_abs: self.log_abs + other.log_abs,
        }
    }

    /// Multiplies by a plain positive factor.
    pub fn scale(&self, factor: f64) -> Self {
        debug_assert!(factor > 0.0);
        if self.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            sign: self.sign,
            log_abs: self.log_abs + factor.ln(),
        }
    }

    /// Signed addition via log-sum-exp with the larger magnitude factored out.
    pub fn add(&self, other: &LogReal) -> Self {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        let (big, small) = if self.log_abs >= other.log_abs {
            (self, other)
        } else {
            (other, self)
        };
        let d = small.log_abs - big.log_abs; // <= 0
        if self.sign == other.sign {
            LogReal {
                sign: big.sign,
                log_abs: big.log_abs + d.exp().ln_1p(),
            }
        } else {
            let r = d.exp(); // in [0, 1]
            if r == 1.0 {
                return LogReal::ZERO;
            }
            LogReal {
                sign: big.sign,
                log_abs: big.log_abs + (-r).ln_1p(),
            }
        }
    }

    pub fn sub(&self, other: &LogReal) -> Self {
        self.add(&other.neg())
    }

    /// Total order consistent with the represented values.
    pub fn cmp_value(&self, other: &LogReal) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.sign, other.sign) {
            (a, b) if a < b => Ordering::Less,
            (a, b) if a > b => Ordering::Greater,
            (0, 0) => Ordering::Equal,
            (1, 1) => self
                .log_abs
                .partial_cmp(&other.log_abs)
                .unwrap_or(Ordering::Equal),
            _ => other
                .log_abs
                .partial_cmp(&self.log_abs)
                .unwrap_or(Ordering::Equal),
        }
    }
}
