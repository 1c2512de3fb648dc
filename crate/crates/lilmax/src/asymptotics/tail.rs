//! The exact law of `sup_{j>=n} M_j / sqrt(2 ln j)`.
//!
//! With `M_1, M_2, ...` the i.i.d. unit-local-time excursion maxima of the
//! OU process, independence turns the distribution function into an infinite
//! product:
//!
//! ```text
//! P{ sup_{j>=n} M_j / sqrt(2 ln j) <= y } = exp( -sum_{j>=n} r(y sqrt(2 ln j)) )
//! ```
//!
//! with `r(u) = 1/(2 S(u))` one-sided and `1/S(u)` two-sided. The sum
//! converges exactly when `y > 1` and is evaluated here with a certified
//! truncation error: leading terms are summed directly, the remainder is
//! either absorbed by an integral-comparison bound through `Gamma(3/2, .)`
//! or evaluated by order-2 Euler-Maclaurin summation with explicit
//! correction terms, whichever certifies first.

use crate::excursion::{ExcursionMaxLaw, Sided};
use crate::specfun::{
    adaptive_simpson_ln, log_scale_ou_fast, ou_asymptotic_sum, scale_ou_log_derivative,
    scale_ou_series, upper_incomplete_gamma_3half, LogReal, OU_SERIES_SWITCH,
};

use super::schedule::LogIndex;
use super::AsymptoticsError;

const LN_2: f64 = std::f64::consts::LN_2;

/// Indices with `ln n` at most this are enumerable as exact integers.
const LN_DIRECT_MAX: f64 = 36.0;

/// How often the direct loop re-checks the analytic tail bound.
const CHECK_EVERY: u64 = 4096;

/// Hard ceiling on directly summed terms; past it certification fails.
const HARD_DIRECT_CAP: u64 = 10_000_000;

/// Relative accuracy of the term kernel (series/asymptotic `ln S`), charged
/// against every certificate.
const KERNEL_SLACK: f64 = 3e-13;

/// A certified evaluation of the tail exponent.
#[derive(Debug, Clone)]
pub struct TailExponent {
    /// The exponent `sum_{j>=n} r(y sqrt(2 ln j))` as a positive log-real.
    pub value: LogReal,
    /// Certified relative error bound.
    pub relative_bound: f64,
    /// Number of directly summed terms.
    pub direct_terms: u64,
    /// `ln J` of the Euler-Maclaurin lattice anchor, when that phase ran.
    pub em_anchor_ln: Option<f64>,
}

/// The law of the tail supremum, with truncation bookkeeping.
#[derive(Debug, Clone)]
pub struct TailSupLaw {
    base: ExcursionMaxLaw,
    index: LogIndex,
    truncation_tolerance: f64,
    direct_cap: u64,
}

impl TailSupLaw {
    /// Builds the law over a base excursion law. Only the closed-form OU
    /// scale is supported: the certified summation machinery leans on the
    /// asymptotics of `S`.
    pub fn new(base: ExcursionMaxLaw, index: LogIndex) -> Result<Self, AsymptoticsError> {
        if !base.scale().is_ou() {
            return Err(AsymptoticsError::UnsupportedBase);
        }
        Ok(TailSupLaw {
            base,
            index,
            truncation_tolerance: 1e-10,
            direct_cap: 4096,
        })
    }

    /// The OU tail law at the given index and sidedness.
    pub fn ou(index: LogIndex, sided: Sided) -> Self {
        TailSupLaw::new(ExcursionMaxLaw::ornstein_uhlenbeck(sided), index)
            .expect("OU base is always supported")
    }

    /// Sets the certified relative tolerance on the exponent (default `1e-10`).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.truncation_tolerance = tol;
        self
    }

    /// Sets the soft floor on directly-summed terms (default `4096`). The
    /// direct phase extends itself past the floor whenever the
    /// Euler-Maclaurin remainder is not yet negligible at the handoff
    /// anchor, up to a hard cap of `10^7` terms; `0` skips the direct phase
    /// entirely.
    pub fn with_direct_cap(mut self, cap: u64) -> Self {
        self.direct_cap = cap;
        self
    }

    pub fn index(&self) -> LogIndex {
        self.index
    }

    pub fn sided(&self) -> Sided {
        self.base.sided()
    }

    pub fn truncation_tolerance(&self) -> f64 {
        self.truncation_tolerance
    }

    /// The exact exponent `-ln P{sup <= y}` with a certified relative bound.
    ///
    /// Fails with [`AsymptoticsError::ExponentDiverges`] when `y <= 1` (the
    /// CDF is zero there) and with [`AsymptoticsError::CertificationFailed`]
    /// when the requested tolerance cannot be certified.
    pub fn tail_exponent(&self, y: f64) -> Result<TailExponent, AsymptoticsError> {
        if !(y > 1.0) {
            return Err(AsymptoticsError::ExponentDiverges { y });
        }
        let mut out = self.one_sided_exponent(y)?;
        if self.base.sided() == Sided::Two {
            // The two-sided rate is exactly twice the one-sided rate.
            out.value = out.value.scale(2.0);
        }
        if out.relative_bound > self.truncation_tolerance {
            return Err(AsymptoticsError::CertificationFailed {
                achieved: out.relative_bound,
                required: self.truncation_tolerance,
            });
        }
        Ok(out)
    }

    /// `P{ sup_{j>=n} M_j / sqrt(2 ln j) <= y }`: zero for `y <= 1`,
    /// `exp(-tail_exponent)` otherwise.
    pub fn tail_cdf(&self, y: f64) -> Result<f64, AsymptoticsError> {
        if y <= 1.0 {
            return Ok(0.0);
        }
        let e = self.tail_exponent(y)?;
        Ok((-e.value.to_value()).exp())
    }

    /// The threshold `y` at which the exponent equals `target`, by bisection
    /// (the exponent is strictly decreasing in `y`).
    pub fn quantile_of_exponent(&self, target: f64) -> Result<f64, AsymptoticsError> {
        if !(target > 0.0) {
            return Err(AsymptoticsError::DomainError {
                what: "exponent target must be positive",
            });
        }
        let exponent_at = |y: f64| -> f64 {
            self.tail_exponent(y)
                .map(|e| e.value.to_value())
                .unwrap_or(f64::INFINITY)
        };
        let mut lo = 1.0 + 1e-9;
        let mut hi = 1.5;
        let mut guard = 0;
        while exponent_at(hi) > target {
            hi *= 1.5;
            guard += 1;
            if guard > 24 {
                return Err(AsymptoticsError::DomainError {
                    what: "exponent quantile ran away (target too small)",
                });
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if exponent_at(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    // -- internals ----------------------------------------------------------

    /// One-sided term `ln g(j) = -(ln 2 + ln S(y sqrt(2 ln j)))` at `ln j = u`.
    fn ln_term_at(&self, y: f64, u: f64) -> f64 {
        -(LN_2 + log_scale_ou_fast(y * (2.0 * u).sqrt()))
    }

    fn one_sided_exponent(&self, y: f64) -> Result<TailExponent, AsymptoticsError> {
        let ln_n = self.index.ln_n();
        let tol = self.truncation_tolerance;

        // The sum runs over the unit lattice anchored at n0 = e^{ln n}. For
        // indices built from an integer n this is that integer to within an
        // ulp; for huge ln_n the lattice anchor is immaterial (the anchored
        // and integer sums differ by less than one term, relative O(1/n)).
        if ln_n <= LN_DIRECT_MAX && self.direct_cap > 0 {
            let n0 = ln_n.exp();
            let ln_g0 = self.ln_term_at(y, ln_n);
            let mut acc = 0.0f64; // sum of g(n0+k)/g(n0), Kahan-compensated
            let mut comp = 0.0f64;
            let mut k = 0u64;
            loop {
                for _ in 0..CHECK_EVERY {
                    let t = (self.ln_term_at(y, (n0 + k as f64).ln()) - ln_g0).exp() - comp;
                    let s = acc + t;
                    comp = (s - acc) - t;
                    acc = s;
                    k += 1;
                }
                let partial = LogReal::from_ln(ln_g0 + acc.ln());
                let bound = self.gamma_tail_bound(y, n0 + k as f64);
                // Finished if adding bound/2 with error bound/2 certifies.
                let total_est = partial.add(&bound.scale(0.5));
                let rel = log_ratio(&bound.scale(0.5), &total_est);
                if rel <= 0.5 * tol {
                    return Ok(TailExponent {
                        value: total_est,
                        relative_bound: rel + KERNEL_SLACK,
                        direct_terms: k,
                        em_anchor_ln: None,
                    });
                }
                if k >= self.direct_cap {
                    // Hand off only once the Euler-Maclaurin remainder is
                    // negligible at this anchor; otherwise keep summing.
                    let anchor = (n0 + k as f64).ln();
                    let rem = em_remainder_ln(y, anchor);
                    if log_ratio(&LogReal::from_ln(rem), &partial) <= 0.25 * tol {
                        break;
                    }
                    if k >= HARD_DIRECT_CAP {
                        return Err(AsymptoticsError::CertificationFailed {
                            achieved: log_ratio(&LogReal::from_ln(rem), &partial),
                            required: tol,
                        });
                    }
                }
            }
            // Hand the remainder to Euler-Maclaurin on the same lattice.
            let partial = LogReal::from_ln(ln_g0 + acc.ln());
            let anchor = (n0 + k as f64).ln();
            let (em_value, em_abs_err) = self.euler_maclaurin_tail(y, anchor)?;
            let total = partial.add(&em_value);
            let rel = log_ratio(&em_abs_err, &total) + KERNEL_SLACK;
            Ok(TailExponent {
                value: total,
                relative_bound: rel,
                direct_terms: k,
                em_anchor_ln: Some(anchor),
            })
        } else {
            let (em_value, em_abs_err) = self.euler_maclaurin_tail(y, ln_n)?;
            let rel = log_ratio(&em_abs_err, &em_value) + KERNEL_SLACK;
            Ok(TailExponent {
                value: em_value,
                relative_bound: rel,
                direct_terms: 0,
                em_anchor_ln: Some(ln_n),
            })
        }
    }

    /// Upper bound on `sum_{i>=j} g(i)`, by one explicit term plus the
    /// integral comparison
    /// `sum_{i>j} g(i) <= kappa int_j^inf (u(t)/2) e^{-u(t)^2/2} dt`
    /// with `kappa = 1/(1 - e^{-u(j)^2/2})` from `S(u) >= (e^{u^2/2} - 1)/u`,
    /// and the integral in closed form through `Gamma(3/2, (y^2-1) ln j)`.
    fn gamma_tail_bound(&self, y: f64, j: f64) -> LogReal {
        let ln_j = j.ln();
        let u_j2 = 2.0 * y * y * ln_j;
        let kappa = 1.0 / (1.0 - (-0.5 * u_j2).exp());
        let y2m1 = y * y - 1.0;
        let gamma = upper_incomplete_gamma_3half(y2m1 * ln_j);
        let ln_integral = (y / std::f64::consts::SQRT_2).ln() - 1.5 * y2m1.ln()
            + gamma.ln_abs().expect("gamma positive");
        let first = LogReal::from_ln(self.ln_term_at(y, ln_j));
        first.add(&LogReal::from_ln(kappa.ln() + ln_integral))
    }

    /// Order-2 Euler-Maclaurin for `sum_{k>=0} g(J + k)` on the unit lattice
    /// anchored at `J = e^a`:
    ///
    /// ```text
    /// sum = int_J^inf g + g(J)/2 - g'(J)/12 + R,   |R| <= |g'''(J)|/360
    /// ```
    ///
    /// (the classical bound is `|g'''|/720` when `g'''` keeps one sign, which
    /// holds in this regime; a factor-2 margin is kept). Returns the value
    /// and an absolute error bound, both as log-reals.
    fn euler_maclaurin_tail(&self, y: f64, a: f64) -> Result<(LogReal, LogReal), AsymptoticsError> {
        let tol = self.truncation_tolerance;
        let s_inf = y * y - 1.0;

        // ln of the u-space integrand h(u) = exp(u - ln 2 - ln S(y sqrt(2u))),
        // written so nothing of order u cancels: above the series switch,
        //   ln h = -(y^2-1) u + ln v - ln 2 - ln(corr(v)),
        // which keeps full precision even at u ~ 1e12 where the naive
        // u - ln S form loses eight digits.
        let ln_h = move |u: f64| {
            let v = y * (2.0 * u).sqrt();
            if v <= OU_SERIES_SWITCH {
                u - LN_2 - scale_ou_series(v).ln()
            } else {
                let (corr, _) = ou_asymptotic_sum(v);
                -s_inf * u + v.ln() - LN_2 - corr.ln()
            }
        };
        // Local decay rate -d ln h/du = rho'(u) - 1.
        let decay = |u: f64| rho_prime(y, u) - 1.0;

        // Find where exponential decay has set in. The integrand can rise
        // first (rho' < 1 near the anchor when y is close to 1).
        let mut b0 = a;
        {
            let mut step = 1.0f64.max(0.25 / s_inf.min(1.0));
            let mut guard = 0;
            while decay(b0) < 0.5 * s_inf {
                b0 += step;
                step *= 2.0;
                guard += 1;
                if guard > 200 {
                    return Err(AsymptoticsError::CertificationFailed {
                        achieved: f64::INFINITY,
                        required: tol,
                    });
                }
            }
        }
        // The log-derivative ratio psi(v)/v is increasing for v >= 2.2, so
        // the decay rate is monotone past that point; keep b in that regime.
        let mut b = b0.max(2.42 / (y * y)) + 100.0 / s_inf;

        let quad_tol = 0.25 * tol;
        let (mut integral, mut quad_rel) = adaptive_simpson_ln(ln_h, a, b, quad_tol)
            .map_err(AsymptoticsError::from)?;
        // Extend the window until the analytic cut bound is negligible.
        let mut cut_bound;
        let mut guard = 0;
        loop {
            let s_b = decay(b);
            cut_bound = LogReal::from_ln(ln_h(b) - s_b.max(1e-300).ln());
            if s_b > 0.0 {
                let rel = log_ratio(&cut_bound, &integral);
                if rel <= 0.125 * tol {
                    break;
                }
            }
            let b2 = b + 100.0 / s_inf;
            let (extra, extra_rel) = adaptive_simpson_ln(ln_h, b, b2, quad_tol)
                .map_err(AsymptoticsError::from)?;
            integral = integral.add(&extra);
            quad_rel = quad_rel.max(extra_rel);
            b = b2;
            guard += 1;
            if guard > 64 {
                return Err(AsymptoticsError::CertificationFailed {
                    achieved: log_ratio(&cut_bound, &integral),
                    required: tol,
                });
            }
        }
        // Mid-point the cut: add half, charge half as error.
        let integral = integral.add(&cut_bound.scale(0.5));

        // Correction terms at the anchor.
        let ln_g = self.ln_term_at(y, a);
        let (r1, _, _) = rho_derivatives(y, a);
        let half_term = LogReal::from_ln(ln_g - LN_2);
        // -g'(J)/12 = + g rho'/(12 J) (g is decreasing).
        let prime_term = LogReal::from_ln(ln_g + r1.ln() - a - 12f64.ln());
        let rem_bound = LogReal::from_ln(em_remainder_ln(y, a));

        let value = integral.add(&half_term).add(&prime_term);
        // The summed-defect quadrature estimate can run optimistic; charge
        // it twice. Log-domain storage also costs ulp(|ln value|) relative
        // per combination, which matters once |ln value| is astronomical.
        let quad_err = match integral.ln_abs() {
            Some(li) => LogReal::from_ln(li + (2.0 * quad_rel).max(1e-300).ln()),
            None => LogReal::ZERO,
        };
        let rep_slack = 8.0 * f64::EPSILON * (1.0 + value.ln_abs().unwrap_or(0.0).abs());
        let err = quad_err
            .add(&cut_bound.scale(0.5))
            .add(&rem_bound)
            .add(&value.scale(rep_slack));
        Ok((value, err))
    }
}

/// A fast evaluator of the tail CDF, backed by a piecewise-Chebyshev fit of
/// `ln tail_exponent` over the support where the CDF moves.
///
/// Used to compare large Monte Carlo samples against the analytic law:
/// evaluation costs nanoseconds while agreeing with [`TailSupLaw::tail_cdf`]
/// far beyond any empirical resolution (the fit reproduces the exponent to
/// the builder tolerance, at most `1e-7` relative).
#[derive(Debug, Clone)]
pub struct CachedTailCdf {
    ln_exponent: crate::chebyshev::PiecewiseChebyshev,
}

impl CachedTailCdf {
    /// Fits the cache between the thresholds where the exponent is 50
    /// (CDF ~ `e^{-50}`) and `1e-18` (CDF ~ 1).
    pub fn new(law: &TailSupLaw) -> Result<Self, AsymptoticsError> {
        let fast = law
            .clone()
            .with_tolerance(law.truncation_tolerance().max(1e-7))
            .with_direct_cap(4096);
        let y_lo = fast.quantile_of_exponent(50.0)?;
        let y_hi = fast.quantile_of_exponent(1e-18)?;
        let ln_exponent = crate::chebyshev::PiecewiseChebyshev::fit(
            |y| {
                fast.tail_exponent(y)
                    .map(|e| e.value.ln_abs().unwrap_or(f64::NEG_INFINITY))
                    .unwrap_or(f64::NAN)
            },
            y_lo,
            y_hi,
            24,
        );
        Ok(CachedTailCdf { ln_exponent })
    }

    /// `ln` of the exponent, clamped to the fitted range.
    pub fn ln_exponent(&self, y: f64) -> f64 {
        self.ln_exponent.eval(y)
    }

    /// Range `[y_lo, y_hi]` over which the CDF transitions.
    pub fn y_range(&self) -> (f64, f64) {
        (self.ln_exponent.lo(), self.ln_exponent.hi())
    }

    /// The cached CDF: 0 below the transition window, ~1 above it.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 1.0 {
            return 0.0;
        }
        (-self.ln_exponent.eval(y).exp()).exp()
    }
}

/// `rho'(u)` where `rho(u) = ln 2 + ln S(y sqrt(2u))`.
fn rho_prime(y: f64, u: f64) -> f64 {
    let v = y * (2.0 * u).sqrt();
    scale_ou_log_derivative(v) * y * y / v
}

/// `ln` of the Euler-Maclaurin remainder bound `|g'''(J)|/180` at anchor
/// `ln J = a` (one-sided terms): `g'''(J)/g(J) = A/J^3` with `A` an `O(y^6)`
/// combination of the log-derivatives.
fn em_remainder_ln(y: f64, a: f64) -> f64 {
    let (r1, r2, r3) = rho_derivatives(y, a);
    let a3 = 3.0 * r2 - r3 - 2.0 * r1;
    let a_comb = a3 + 3.0 * (-r1) * (r1 - r2) + (-r1).powi(3);
    let ln_g = -(LN_2 + log_scale_ou_fast(y * (2.0 * a).sqrt()));
    ln_g + a_comb.abs().max(1e-300).ln() - 3.0 * a - 180f64.ln()
}

/// First three derivatives of `rho(u) = ln 2 + ln S(v)`, `v = y sqrt(2u)`.
fn rho_derivatives(y: f64, u: f64) -> (f64, f64, f64) {
    let v = y * (2.0 * u).sqrt();
    let psi = scale_ou_log_derivative(v);
    let psi1 = psi * (v - psi);
    let psi2 = psi1 * (v - psi) + psi * (1.0 - psi1);
    let w = y * y / v; // dv/du
    let r1 = psi * w;
    let r2 = w * w * (psi1 - psi / v);
    let r3 = w * w * w * (psi2 - 3.0 * psi1 / v + 3.0 * psi / (v * v));
    (r1, r2, r3)
}

/// `|num| / |den|` for log-reals, `inf` when the denominator is zero.
fn log_ratio(num: &LogReal, den: &LogReal) -> f64 {
    match (num.ln_abs(), den.ln_abs()) {
        (None, _) => 0.0,
        (Some(n), Some(d)) => (n - d).exp(),
        (Some(_), None) => f64::INFINITY,
    }
}
