//! Diffusion scale functions.
//!
//! For a regular diffusion `dZ = sigma(Z) dw + a(Z) dt` the scale function is
//! `f(x) = int_0^x exp(-2 int_0^y a(u)/sigma^2(u) du) dy`, normalized so that
//! `f(0) = 0` and `f'(0) = 1`. The Ornstein-Uhlenbeck case
//! (`sigma = 1`, `a(u) = -u/2`) has the closed form
//! `S(x) = int_0^x exp(y^2/2) dy`, which grows like `x^{-1} exp(x^2/2)` and
//! needs a log-domain representation past `x ~ 37`.

use std::cell::Cell;
use std::sync::Arc;

use super::logreal::LogReal;
use super::quad::{adaptive_simpson, adaptive_simpson_rel};
use super::SpecFunError;

/// Argument above which the OU scale switches from quadrature to the
/// asymptotic series. At the switch point the series' smallest term is below
/// `2e-14` relative, so both branches agree to better than `1e-12`.
pub(crate) const OU_SERIES_SWITCH: f64 = 8.0;

/// ln(f64::MAX), the overflow threshold for plain-valued results.
const LN_F64_MAX: f64 = 709.782712893384;

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck scale S(x) = int_0^x exp(y^2/2) dy
// ---------------------------------------------------------------------------

/// Convergent power series `S(x) = sum_k x^{2k+1} / ((2k+1) 2^k k!)`.
///
/// All terms are positive, so there is no cancellation; used as the fast
/// kernel inside product sums. Accurate to a few ulp for `|x| <= 9`.
pub(crate) fn scale_ou_series(x: f64) -> f64 {
    let x2h = 0.5 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 1.0f64;
    loop {
        term *= x2h / k * ((2.0 * k - 1.0) / (2.0 * k + 1.0));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() || k > 400.0 {
            return sum;
        }
        k += 1.0;
    }
}

/// Divergent asymptotic series `sum_k (2k-1)!! / x^{2k}` truncated at its
/// smallest term. Returns `(sum, relative_bound)` where the bound is the
/// first omitted term over the sum.
pub(crate) fn ou_asymptotic_sum(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0.0f64;
    loop {
        let next = term * (2.0 * k + 1.0) / x2;
        if next >= term || next < f64::EPSILON * sum {
            return (sum, next / sum);
        }
        sum += next;
        term = next;
        k += 1.0;
    }
}

/// `sum_{k>=1} (2k-1)!! / x^{2k}`: the asymptotic correction with the
/// leading 1 removed, exact where the full sum would round it away.
pub(crate) fn ou_asymptotic_corr_minus_one(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0f64;
    let mut sum = 0.0f64;
    let mut k = 0.0f64;
    loop {
        let next = term * (2.0 * k + 1.0) / x2;
        if next >= term && k > 0.0 {
            return sum;
        }
        if next < f64::EPSILON * sum.max(f64::MIN_POSITIVE) && k > 0.0 {
            return sum;
        }
        sum += next;
        term = next;
        k += 1.0;
        if k > 200.0 {
            return sum;
        }
    }
}

/// `ln S(x)` for `x > 0` as a plain `f64`: power series below the switch
/// point, asymptotic series above. Fast path for product sums.
pub(crate) fn log_scale_ou_fast(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= OU_SERIES_SWITCH {
        scale_ou_series(x).ln()
    } else {
        let (s, _) = ou_asymptotic_sum(x);
        0.5 * x * x - x.ln() + s.ln()
    }
}

/// `psi(v) = exp(v^2/2) / S(v) = S'(v)/S(v)`, the log-derivative of the OU
/// scale. Tends to `v` from below; used by the Euler-Maclaurin corrections.
pub(crate) fn scale_ou_log_derivative(v: f64) -> f64 {
    debug_assert!(v > 0.0);
    if v <= OU_SERIES_SWITCH {
        (0.5 * v * v).exp() / scale_ou_series(v)
    } else {
        let (s, _) = ou_asymptotic_sum(v);
        v / s
    }
}

/// The OU scale function `S(x) = int_0^x exp(y^2/2) dy`, extended to `x < 0`
/// by odd symmetry.
///
/// Evaluated by adaptive Simpson below the series switch point and by the
/// asymptotic series above it; relative accuracy `1e-12`. Returns
/// [`SpecFunError::Overflow`] once the plain value exceeds `f64` range
/// (near `x = 37.7`), directing the caller to [`log_scale_ou`].
pub fn scale_ou(x: f64) -> Result<f64, SpecFunError> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < 0.0 {
        return scale_ou(-x).map(|v| -v);
    }
    if x <= OU_SERIES_SWITCH {
        let integrand = |y: f64| (0.5 * y * y).exp();
        let (pilot, _) = adaptive_simpson(integrand, 0.0, x, 1e-6)?;
        let tol = 1e-13 * pilot.abs().max(1.0);
        let (v, _) = adaptive_simpson(integrand, 0.0, x, tol)?;
        Ok(v)
    } else {
        let lg = log_scale_ou_fast(x);
        if lg >= LN_F64_MAX {
            return Err(SpecFunError::Overflow { ln_value: lg });
        }
        Ok(lg.exp())
    }
}

/// `ln S(x)` in log-domain form, total on all of `x >= 0` (odd symmetry for
/// `x < 0`). Absolute accuracy `1e-10` below the switch point, relative
/// `1e-8` or better above it.
pub fn log_scale_ou(x: f64) -> LogReal {
    if x == 0.0 {
        return LogReal::ZERO;
    }
    if x < 0.0 {
        return log_scale_ou(-x).neg();
    }
    if x <= OU_SERIES_SWITCH {
        // Quadrature value fits comfortably in plain f64 here (S(8) ~ 1.06e13).
        let v = scale_ou(x).expect("no overflow below switch point");
        LogReal::from_value(v)
    } else {
        LogReal::from_ln(log_scale_ou_fast(x))
    }
}

// ---------------------------------------------------------------------------
// General coefficient fields
// ---------------------------------------------------------------------------

type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Diffusion coefficients `(sigma, a)` with `sigma` bounded away from zero.
///
/// The lower bound is checked at every quadrature evaluation; a violation
/// aborts the integral with [`SpecFunError::SigmaBoundViolated`].
#[derive(Clone)]
pub struct CoefficientField {
    sigma: Coefficient,
    drift: Coefficient,
    sigma_lower_bound: f64,
}

impl std::fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientField")
            .field("sigma_lower_bound", &self.sigma_lower_bound)
            .finish_non_exhaustive()
    }
}

impl CoefficientField {
    pub fn new(
        sigma: impl Fn(f64) -> f64 + Send + Sync + 'static,
        drift: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sigma_lower_bound: f64,
    ) -> Result<Self, SpecFunError> {
        if !(sigma_lower_bound > 0.0) {
            return Err(SpecFunError::DomainError {
                what: "sigma_lower_bound must be positive",
            });
        }
        Ok(CoefficientField {
            sigma: Arc::new(sigma),
            drift: Arc::new(drift),
            sigma_lower_bound,
        })
    }

    /// `sigma = 1`, no drift: Brownian motion, scale function is the identity.
    pub fn driftless() -> Self {
        CoefficientField::new(|_| 1.0, |_| 0.0, 0.5).expect("static bound")
    }

    /// `sigma = 1`, `a(u) = -u/2`: the OU field, whose scale is `S`.
    pub fn ou_drift() -> Self {
        CoefficientField::new(|_| 1.0, |u| -0.5 * u, 0.5).expect("static bound")
    }

    /// `sigma = 1`, `a(u) = +u/2`: outward drift, scale
    /// `int_0^x exp(-y^2/2) dy`.
    pub fn repelling() -> Self {
        CoefficientField::new(|_| 1.0, |u| 0.5 * u, 0.5).expect("static bound")
    }
}

/// General scale function `f(x) = int_0^x exp(-2 int_0^y a/sigma^2 du) dy`
/// by nested adaptive quadrature, relative accuracy about `1e-9`.
pub fn scale_general(field: &CoefficientField, x: f64) -> Result<f64, SpecFunError> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let sigma_violation: Cell<Option<f64>> = Cell::new(None);
    let drift_over_sigma2 = |u: f64| {
        let s = (field.sigma)(u);
        if !(s >= field.sigma_lower_bound) {
            sigma_violation.set(Some(u));
            return f64::NAN;
        }
        (field.drift)(u) / (s * s)
    };
    let inner = |y: f64| -> f64 {
        if y == 0.0 {
            return 1.0;
        }
        match adaptive_simpson_rel(&drift_over_sigma2, 0.0, y, 1e-11) {
            Ok((b, _)) => (-2.0 * b).exp(),
            Err(_) => f64::NAN,
        }
    };
    let result = adaptive_simpson_rel(inner, 0.0, x, 1e-10);
    if let Some(at) = sigma_violation.get() {
        return Err(SpecFunError::SigmaBoundViolated { at });
    }
    result.map(|(v, _)| v)
}

// ---------------------------------------------------------------------------
// Handles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum ScaleKind {
    OrnsteinUhlenbeck,
    General(CoefficientField),
}

/// A scale function fixed to the normalization `f(0) = 0`, `f'(0) = 1`:
/// either the closed-form OU scale or a general quadrature-backed field.
#[derive(Debug, Clone)]
pub struct ScaleFunctionHandle {
    kind: ScaleKind,
}

impl ScaleFunctionHandle {
    pub fn ornstein_uhlenbeck() -> Self {
        ScaleFunctionHandle {
            kind: ScaleKind::OrnsteinUhlenbeck,
        }
    }

    pub fn general(field: CoefficientField) -> Self {
        ScaleFunctionHandle {
            kind: ScaleKind::General(field),
        }
    }

    pub fn is_ou(&self) -> bool {
        matches!(self.kind, ScaleKind::OrnsteinUhlenbeck)
    }

    /// `f(x)` as a plain value. Overflows for the OU kind around `x = 37.7`.
    pub fn value(&self, x: f64) -> Result<f64, SpecFunError> {
        match &self.kind {
            ScaleKind::OrnsteinUhlenbeck => scale_ou(x),
            ScaleKind::General(field) => scale_general(field, x),
        }
    }

    /// `f(x)` in log-domain form, total for the OU kind.
    ///
    /// The OU branch evaluates the convergent/asymptotic series pair directly
    /// (the same integral as [`scale_ou`], agreeing with the quadrature path
    /// to `1e-12`); it is the hot path inside quantile solvers and product
    /// sums.
    pub fn ln_value(&self, x: f64) -> Result<LogReal, SpecFunError> {
        match &self.kind {
            ScaleKind::OrnsteinUhlenbeck => {
                if x == 0.0 {
                    Ok(LogReal::ZERO)
                } else if x < 0.0 {
                    Ok(LogReal::from_ln(log_scale_ou_fast(-x)).neg())
                } else {
                    Ok(LogReal::from_ln(log_scale_ou_fast(x)))
                }
            }
            ScaleKind::General(field) => Ok(LogReal::from_value(scale_general(field, x)?)),
        }
    }
}
