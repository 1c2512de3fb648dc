//! The law of the maximum of a diffusion excursion over one unit of local
//! time at zero.
//!
//! For a regular diffusion started at its zero with inverse local time
//! `theta`, the running maximum over `[0, theta_1]` satisfies
//!
//! ```text
//! P{ sup Z <= l } = exp( -f'(0) / (2 {f(l) - f(0)}) )
//! ```
//!
//! with `f` the scale function. The two-sided variant (maximum of `|Z|`)
//! doubles the exponent. With the normalization `f(0) = 0`, `f'(0) = 1` the
//! exponent is `1/(2 f(l))` resp. `1/f(l)`; equivalently, upward exceedances
//! of `l` form a Poisson process in local time with those rates.

use thiserror::Error;

use crate::specfun::{LogReal, ScaleFunctionHandle, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExcursionError {
    #[error("lambda must be positive (the law is supported on (0, inf)), got {lambda}")]
    LambdaOutOfDomain { lambda: f64 },
    #[error("probability must lie strictly between 0 and 1, got {p}")]
    ProbabilityOutOfDomain { p: f64 },
    #[error("quantile bracketing failed: cdf never straddles p = {p}")]
    BracketingFailed { p: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// One-sided (`sup Z`) or two-sided (`sup |Z|`) excursion maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sided {
    One,
    Two,
}

impl Sided {
    /// The exceedance rate multiplier relative to the one-sided case.
    pub(crate) fn rate_multiplier(self) -> f64 {
        match self {
            Sided::One => 1.0,
            Sided::Two => 2.0,
        }
    }
}

/// The per-unit-local-time excursion-maximum law of a diffusion.
#[derive(Debug, Clone)]
pub struct ExcursionMaxLaw {
    scale: ScaleFunctionHandle,
    sided: Sided,
}

impl ExcursionMaxLaw {
    pub fn new(scale: ScaleFunctionHandle, sided: Sided) -> Self {
        ExcursionMaxLaw { scale, sided }
    }

    /// The Ornstein-Uhlenbeck law, whose scale is `S(x) = int_0^x e^{y^2/2} dy`.
    pub fn ornstein_uhlenbeck(sided: Sided) -> Self {
        ExcursionMaxLaw::new(ScaleFunctionHandle::ornstein_uhlenbeck(), sided)
    }

    pub fn sided(&self) -> Sided {
        self.sided
    }

    pub fn scale(&self) -> &ScaleFunctionHandle {
        &self.scale
    }

    /// `-ln cdf(lambda)` as a log-domain value: `1/(2 f(l))` one-sided,
    /// `1/f(l)` two-sided.
    pub fn log_exceedance_rate(&self, lambda: f64) -> Result<LogReal, ExcursionError> {
        if !(lambda > 0.0) {
            return Err(ExcursionError::LambdaOutOfDomain { lambda });
        }
        let lf = self.scale.ln_value(lambda)?;
        let ln_f = lf.ln_abs().expect("scale positive on positive arguments");
        let ln_rate = self.sided.rate_multiplier().ln() - std::f64::consts::LN_2 - ln_f;
        Ok(LogReal::from_ln(ln_rate))
    }

    /// The Poisson rate of excursions exceeding `lambda` per unit local time.
    pub fn exceedance_rate(&self, lambda: f64) -> Result<f64, ExcursionError> {
        Ok(self.log_exceedance_rate(lambda)?.to_value())
    }

    /// `P{ M_1 <= lambda }`; domain error for `lambda <= 0`.
    pub fn cdf(&self, lambda: f64) -> Result<f64, ExcursionError> {
        let rate = self.exceedance_rate(lambda)?;
        Ok((-rate).exp())
    }

    /// The unique `lambda` with `cdf(lambda) = p`, by bracketing from
    /// `[1e-8, 1]` (doubling upward until the CDF straddles `p`) followed by
    /// a bisection/secant hybrid to relative tolerance `1e-12`.
    pub fn quantile(&self, p: f64) -> Result<f64, ExcursionError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(ExcursionError::ProbabilityOutOfDomain { p });
        }
        // cdf(l) = p  <=>  ln f(l) = ln(m / (2 * -ln p)), m the sided multiplier.
        let target_ln_f = (self.sided.rate_multiplier() / (2.0 * -p.ln())).ln();
        let objective = |l: f64| -> Result<f64, ExcursionError> {
            let lf = self.scale.ln_value(l)?;
            Ok(lf.ln_abs().expect("positive") - target_ln_f)
        };

        let mut lo = 1e-8;
        let mut hi = 1.0;
        let mut flo = objective(lo)?;
        if flo > 0.0 {
            // Shrink below 1e-8: f(l) ~ l near zero, so walk down geometrically.
            for _ in 0..60 {
                lo *= 0.25;
                flo = objective(lo)?;
                if flo <= 0.0 {
                    break;
                }
            }
            if flo > 0.0 {
                return Err(ExcursionError::BracketingFailed { p });
            }
        }
        let mut fhi = objective(hi)?;
        let mut doublings = 0;
        while fhi < 0.0 {
            hi *= 2.0;
            fhi = objective(hi)?;
            doublings += 1;
            if doublings > 60 {
                return Err(ExcursionError::BracketingFailed { p });
            }
        }

        // Bisection with a secant candidate when it lands inside the bracket.
        for _ in 0..200 {
            if (hi - lo) <= 1e-13 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let secant = if (fhi - flo).abs() > 0.0 {
                let s = lo - flo * (hi - lo) / (fhi - flo);
                if s > lo && s < hi {
                    s
                } else {
                    mid
                }
            } else {
                mid
            };
            // Alternate: take the secant point, but never let the bracket
            // stagnate (fall back to the midpoint when secant hugs an edge).
            let x = if (secant - lo).min(hi - secant) < 1e-3 * (hi - lo) {
                mid
            } else {
                secant
            };
            let fx = objective(x)?;
            if fx == 0.0 {
                return Ok(x);
            }
            if fx < 0.0 {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Inverse-transform sample: `quantile(u)` for `u` drawn uniform on (0,1).
    pub fn sample(&self, u: f64) -> Result<f64, ExcursionError> {
        self.quantile(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{scale_ou, CoefficientField};
    use crate::stats::{ks_statistic, EmpiricalCdf};
    use rand::{Rng, SeedableRng};

    fn ou_one() -> ExcursionMaxLaw {
        ExcursionMaxLaw::ornstein_uhlenbeck(Sided::One)
    }

    fn ou_two() -> ExcursionMaxLaw {
        ExcursionMaxLaw::ornstein_uhlenbeck(Sided::Two)
    }

    #[test]
    fn cdf_vanishes_at_zero_plus() {
        assert!(ou_one().cdf(1e-9).unwrap() < 1e-300);
        assert!(ou_one().cdf(36.0).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn cdf_at_one_matches_scale_oracle() {
        let s1 = scale_ou(1.0).unwrap();
        let expect = (-1.0 / (2.0 * s1)).exp();
        let got = ou_one().cdf(1.0).unwrap();
        assert!((got - expect).abs() < 1e-12);
        // exponent 1/(2 S(1)) quoted as ~0.4185
        assert!((1.0 / (2.0 * s1) - 0.4185).abs() < 1e-3);
    }

    #[test]
    fn two_sided_is_square_of_one_sided() {
        let one = ou_one();
        let two = ou_two();
        for i in 1..=1000 {
            let l = 0.005 * i as f64;
            let a = one.cdf(l).unwrap();
            let b = two.cdf(l).unwrap();
            assert!((b - a * a).abs() <= 1e-12, "lambda={l}: {b} vs {}", a * a);
        }
    }

    #[test]
    fn two_sided_dominates_stochastically() {
        let one = ou_one();
        let two = ou_two();
        for i in 1..=50 {
            let l = 0.1 * i as f64;
            assert!(two.cdf(l).unwrap() <= one.cdf(l).unwrap());
        }
    }

    #[test]
    fn lambda_domain_errors() {
        assert!(matches!(
            ou_one().cdf(0.0),
            Err(ExcursionError::LambdaOutOfDomain { .. })
        ));
        assert!(ou_one().cdf(-1.0).is_err());
    }

    #[test]
    fn rate_is_minus_log_cdf() {
        let law = ou_one();
        for i in 1..=40 {
            let l = 0.2 * i as f64;
            let r = law.exceedance_rate(l).unwrap();
            let c = law.cdf(l).unwrap();
            if c > 1e-300 && r > 1e-12 {
                assert!((r - -c.ln()).abs() <= 1e-12 * r.max(1.0), "lambda={l}");
            }
        }
    }

    #[test]
    fn driftless_rates_are_poisson_exact() {
        let handle = crate::specfun::ScaleFunctionHandle::general(CoefficientField::driftless());
        let one = ExcursionMaxLaw::new(handle.clone(), Sided::One);
        let two = ExcursionMaxLaw::new(handle, Sided::Two);
        // One-sided at beta = 1/2: rate (2 beta)^{-1} = 1.
        let r1 = one.exceedance_rate(0.5).unwrap();
        assert!((r1 - 1.0).abs() < 1e-13, "one-sided rate {r1}");
        // Two-sided at beta = 1: rate beta^{-1} = 1.
        let r2 = two.exceedance_rate(1.0).unwrap();
        assert!((r2 - 1.0).abs() < 1e-13, "two-sided rate {r2}");
        // General grid: 1/(2 lambda) and 1/lambda.
        for i in 1..=10 {
            let l = 0.3 * i as f64;
            assert!((one.exceedance_rate(l).unwrap() - 1.0 / (2.0 * l)).abs() < 1e-12 / l);
            assert!((two.exceedance_rate(l).unwrap() - 1.0 / l).abs() < 1e-12 / l);
        }
    }

    #[test]
    fn quantile_round_trips() {
        let law = ou_one();
        for l in [0.5, 1.0, 2.0, 3.0] {
            let p = law.cdf(l).unwrap();
            let back = law.quantile(p).unwrap();
            assert!((back - l).abs() <= 1e-10 * l, "lambda={l}, back={back}");
        }
    }

    #[test]
    fn quantile_median_solves_scale_equation() {
        // cdf(l) = 1/2  <=>  S(l) = 1/(2 ln 2).
        let med = ou_one().quantile(0.5).unwrap();
        let target = 1.0 / (2.0 * std::f64::consts::LN_2);
        assert!((scale_ou(med).unwrap() - target).abs() < 1e-10);
    }

    #[test]
    fn quantile_monotone_and_domain() {
        let law = ou_one();
        let mut prev = 0.0;
        for i in 1..=19 {
            let q = law.quantile(0.05 * i as f64).unwrap();
            assert!(q > prev);
            prev = q;
        }
        assert!(law.quantile(0.0).is_err());
        assert!(law.quantile(1.0).is_err());
    }

    #[test]
    fn quantile_extreme_probabilities() {
        let law = ou_one();
        let tiny = law.quantile(1e-300).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-2);
        let big = law.quantile(1.0 - 1e-15).unwrap();
        assert!(big > 7.0, "big quantile {big}");
        assert!((law.cdf(big).unwrap() - (1.0 - 1e-15)).abs() < 1e-13);
    }

    #[test]
    fn sample_at_cdf_of_one_returns_one() {
        let law = ou_one();
        let u = law.cdf(1.0).unwrap();
        let s = law.sample(u).unwrap();
        assert!((s - 1.0).abs() < 1e-10, "s = {s}");
    }

    #[test]
    fn sample_stream_reproducible() {
        let law = ou_one();
        let draw = |seed: u64| -> Vec<f64> {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            (0..100)
                .map(|_| law.sample(rng.random::<f64>().clamp(1e-300, 1.0 - 1e-16)).unwrap())
                .collect()
        };
        assert_eq!(draw(9), draw(9));
    }

    #[test]
    fn inverse_transform_sampler_passes_ks() {
        let law = ou_one();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let n = 100_000usize;
        let samples: Vec<f64> = (0..n)
            .map(|_| law.sample(rng.random::<f64>().clamp(1e-300, 1.0 - 1e-16)).unwrap())
            .collect();
        let ecdf = EmpiricalCdf::new(samples).unwrap();
        let d = ks_statistic(&ecdf, |l| if l <= 0.0 { 0.0 } else { law.cdf(l).unwrap() }).unwrap();
        assert!(d < 1.628 / (n as f64).sqrt(), "KS = {d}");
    }
}
