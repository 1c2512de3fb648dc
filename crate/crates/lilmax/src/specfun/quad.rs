//! Adaptive Simpson quadrature, in plain and log-domain flavors.

use super::logreal::LogReal;
use super::SpecFunError;

/// Hard cap on bisection depth. Reaching it means the integrand is not
/// resolving (non-integrable blow-up or NaN), which callers surface as a
/// divergence error.
const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    // (fa + 4 fm + fb)/6 first: a constant integrand then integrates exactly.
    (b - a) * ((fa + 4.0 * fm + fb) / 6.0)
}

struct Adaptive<'a, F> {
    f: &'a F,
    abs_tol: f64,
    err: f64,
    evals: u64,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn descend(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, SpecFunError> {
        if depth >= MAX_DEPTH {
            return Err(SpecFunError::QuadratureDivergence);
        }
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        self.evals += 2;
        if !flm.is_finite() || !frm.is_finite() {
            return Err(SpecFunError::QuadratureDivergence);
        }
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        // Noise floor: once the defect is at rounding level relative to the
        // panel values, further bisection only chases round-off.
        let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= (15.0 * tol).max(floor) {
            self.err += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        let half = 0.5 * tol;
        let l = self.descend(a, m, fa, flm, fm, left, half, depth + 1)?;
        let r = self.descend(m, b, fm, frm, fb, right, half, depth + 1)?;
        Ok(l + r)
    }
}

/// Integrates `f` over `[a, b]` by adaptive Simpson bisection to absolute
/// tolerance `abs_tol`. Returns the value and an accumulated error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<(f64, f64), SpecFunError> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(SpecFunError::QuadratureDivergence);
    }
    let whole = simpson(fa, fm, fb, a, b);
    let mut state = Adaptive {
        f: &f,
        abs_tol,
        err: 0.0,
        evals: 3,
    };
    let v = state.descend(a, b, fa, fm, fb, whole, state.abs_tol, 0)?;
    Ok((v, state.err))
}

/// Integrates `f` to a relative target by a pilot pass followed by an
/// absolute-tolerance pass scaled to the pilot estimate.
pub fn adaptive_simpson_rel<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<(f64, f64), SpecFunError> {
    let (pilot, _) = adaptive_simpson(&f, a, b, 1e-6)?;
    let scale = pilot.abs().max(1e-300);
    adaptive_simpson(&f, a, b, rel_tol * scale)
}

/// Adaptive Simpson for a positive integrand given by its natural log.
///
/// Each panel is normalized by the largest of its three log-values before
/// exponentiating, so integrands spanning thousands of e-folds integrate
/// without overflow. The result is a positive [`LogReal`] together with a
/// relative error estimate.
pub fn adaptive_simpson_ln<F: Fn(f64) -> f64>(
    ln_f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<(LogReal, f64), SpecFunError> {
    if a >= b {
        return Ok((LogReal::ZERO, 0.0));
    }

    struct Frame {
        a: f64,
        b: f64,
        la: f64,
        lm: f64,
        lb: f64,
        depth: u32,
    }

    fn panel_value(fr: &Frame) -> LogReal {
        let peak = fr.la.max(fr.lm).max(fr.lb);
        if peak == f64::NEG_INFINITY {
            return LogReal::ZERO;
        }
        let s = ((fr.la - peak).exp() + 4.0 * (fr.lm - peak).exp() + (fr.lb - peak).exp()) / 6.0;
        LogReal::from_ln(peak + (s * (fr.b - fr.a)).ln())
    }

    let mid = 0.5 * (a + b);
    let mut stack = vec![Frame {
        a,
        b,
        la: ln_f(a),
        lm: ln_f(mid),
        lb: ln_f(b),
        depth: 0,
    }];
    let mut total = LogReal::ZERO;
    let mut err = LogReal::ZERO;

    while let Some(fr) = stack.pop() {
        if fr.depth >= MAX_DEPTH {
            return Err(SpecFunError::QuadratureDivergence);
        }
        let whole = panel_value(&fr);
        let m = 0.5 * (fr.a + fr.b);
        let lm_left = ln_f(0.5 * (fr.a + m));
        let lm_right = ln_f(0.5 * (m + fr.b));
        let left = Frame {
            a: fr.a,
            b: m,
            la: fr.la,
            lm: lm_left,
            lb: fr.lm,
            depth: fr.depth + 1,
        };
        let right = Frame {
            a: m,
            b: fr.b,
            la: fr.lm,
            lm: lm_right,
            lb: fr.lb,
            depth: fr.depth + 1,
        };
        let halves = panel_value(&left).add(&panel_value(&right));
        let delta = halves.sub(&whole);
        let fine_enough = match (delta.ln_abs(), halves.ln_abs()) {
            (None, _) => true,
            (Some(d), Some(h)) => d - h <= (15.0 * rel_tol).ln(),
            (Some(_), None) => false,
        };
        // Refuse to accept the root panel untried: a wide first panel can
        // alias a decaying integrand.
        if fine_enough && fr.depth > 0 {
            total = total.add(&halves);
            err = err.add(&LogReal::from_ln(
                delta.ln_abs().unwrap_or(f64::NEG_INFINITY) - 15f64.ln(),
            ));
        } else {
            stack.push(left);
            stack.push(right);
        }
    }

    let rel_err = match (err.ln_abs(), total.ln_abs()) {
        (None, _) => 0.0,
        (Some(e), Some(t)) => (e - t).exp(),
        (Some(_), None) => f64::INFINITY,
    };
    Ok((total, rel_err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_near_exact() {
        let (v, _) = adaptive_simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn constant_integrand_is_exact() {
        let (v, _) = adaptive_simpson(|_| 1.0, 0.0, 0.5, 1e-13).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn exp_integral() {
        let (v, _) = adaptive_simpson(f64::exp, 0.0, 1.0, 1e-13).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn nonintegrable_blowup_is_reported() {
        let r = adaptive_simpson(|x| 1.0 / (x * x), 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(SpecFunError::QuadratureDivergence)));
    }

    #[test]
    fn log_domain_matches_plain_for_gaussian() {
        let (lv, rel) = adaptive_simpson_ln(|x: f64| -0.5 * x * x, 0.0, 6.0, 1e-12).unwrap();
        let (pv, _) = adaptive_simpson(|x: f64| (-0.5 * x * x).exp(), 0.0, 6.0, 1e-14).unwrap();
        let got = lv.to_value();
        assert!((got - pv).abs() < 1e-11 * pv, "got {got}, want {pv}");
        assert!(rel < 1e-10);
    }

    #[test]
    fn log_domain_handles_huge_offsets() {
        // integrand exp(1000 - x) on [0, 40]: value e^1000 (1 - e^-40)
        let (lv, _) = adaptive_simpson_ln(|x: f64| 1000.0 - x, 0.0, 40.0, 1e-12).unwrap();
        let expect = 1000.0 + (-(-40f64).exp()).ln_1p();
        assert!((lv.ln_abs().unwrap() - expect).abs() < 1e-10);
    }
}
