//! Empirical-distribution utilities and convergence diagnostics.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("samples contain non-finite values")]
    NonFiniteSamples,
}

/// An empirical CDF: sorted samples evaluated as a right-continuous step
/// function `x -> #{samples <= x} / count`.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self, StatsError> {
        if samples.is_empty() {
            return Err(StatsError::InsufficientSamples { needed: 1, got: 0 });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFiniteSamples);
        }
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(EmpiricalCdf { samples })
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    /// `#{samples <= x} / count`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.samples.partition_point(|&s| s <= x);
        idx as f64 / self.samples.len() as f64
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Exact one-sample Kolmogorov-Smirnov statistic of an empirical CDF against
/// a continuous CDF: `sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> Result<f64, StatsError> {
    let n = ecdf.count();
    if n < 10 {
        return Err(StatsError::InsufficientSamples { needed: 10, got: n });
    }
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in ecdf.sorted_samples().iter().enumerate() {
        let f = cdf(x);
        let hi = ((i + 1) as f64 / nf - f).abs();
        let lo = (i as f64 / nf - f).abs();
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// Asymptotic Kolmogorov tail `Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for k in 1..200 {
        let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-10 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a one-sample KS statistic at the given sample count.
pub fn ks_p_value(statistic: f64, count: usize) -> Result<f64, StatsError> {
    if count < 10 {
        return Err(StatsError::InsufficientSamples {
            needed: 10,
            got: count,
        });
    }
    Ok(kolmogorov_tail((count as f64).sqrt() * statistic))
}

/// One row of a [`convergence_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub label: String,
    pub value: f64,
    /// Difference to the previous row; `None` on the first row.
    pub delta: Option<f64>,
    /// `value - limit` when a limit is supplied.
    pub gap_to_limit: Option<f64>,
    /// Ratio of successive gaps (a contraction factor) when a limit is
    /// supplied; `None` on the first row.
    pub gap_ratio: Option<f64>,
}

/// Tabulates a ladder of values with first differences and, when a limit is
/// supplied, gaps to the limit and their ratios.
pub fn convergence_table(values: &[(String, f64)], limit: Option<f64>) -> Vec<ConvergenceRow> {
    let mut rows = Vec::with_capacity(values.len());
    for (i, (label, value)) in values.iter().enumerate() {
        let delta = (i > 0).then(|| value - values[i - 1].1);
        let gap_to_limit = limit.map(|l| value - l);
        let gap_ratio = match (limit, i) {
            (Some(l), i) if i > 0 => {
                let prev = values[i - 1].1 - l;
                (prev != 0.0).then(|| (value - l) / prev)
            }
            _ => None,
        };
        rows.push(ConvergenceRow {
            label: label.clone(),
            value: *value,
            delta,
            gap_to_limit,
            gap_ratio,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gumbel_cdf;
    use crate::specfun::gumbel_quantile;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ecdf_step_values() {
        let e = EmpiricalCdf::new(vec![2.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(1.0), 0.25);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(10.0), 1.0);
    }

    #[test]
    fn ks_statistic_zero_against_own_evaluator() {
        let e = EmpiricalCdf::new((0..100).map(|i| i as f64).collect()).unwrap();
        let clone = e.clone();
        let d = ks_statistic(&e, |x| clone.eval(x)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn ks_statistic_near_one_for_shifted_samples() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        let samples: Vec<f64> = (0..1000)
            .map(|_| gumbel_quantile(rng.random_range(1e-9..1.0 - 1e-9)).unwrap() + 10.0)
            .collect();
        let e = EmpiricalCdf::new(samples).unwrap();
        let d = ks_statistic(&e, gumbel_cdf).unwrap();
        assert!(d > 0.95, "d = {d}");
    }

    #[test]
    fn ks_invariant_under_increasing_reparameterization() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let samples: Vec<f64> = (0..2000)
            .map(|_| gumbel_quantile(rng.random_range(1e-12..1.0 - 1e-12)).unwrap())
            .collect();
        let e = EmpiricalCdf::new(samples.clone()).unwrap();
        let d1 = ks_statistic(&e, gumbel_cdf).unwrap();
        // x -> exp(x) is strictly increasing; transformed samples against the
        // transformed CDF give the same statistic.
        let e2 = EmpiricalCdf::new(samples.iter().map(|x| x.exp()).collect()).unwrap();
        let d2 = ks_statistic(&e2, |y: f64| gumbel_cdf(y.ln())).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn inverse_transform_samples_pass_ks_at_one_percent() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let n = 100_000usize;
        let samples: Vec<f64> = (0..n)
            .map(|_| gumbel_quantile(rng.random::<f64>().max(1e-300).min(1.0 - 1e-16)).unwrap())
            .collect();
        let e = EmpiricalCdf::new(samples).unwrap();
        let d = ks_statistic(&e, gumbel_cdf).unwrap();
        assert!(d < 1.628 / (n as f64).sqrt(), "d = {d}");
    }

    #[test]
    fn kolmogorov_critical_value() {
        let q = kolmogorov_tail(1.628);
        assert!((q - 0.01).abs() < 3e-4, "Q(1.628) = {q}");
    }

    #[test]
    fn p_value_decreasing_in_statistic() {
        let mut prev = 1.1;
        for i in 0..60 {
            let d = 0.001 + 0.0005 * i as f64;
            let p = ks_p_value(d, 100_000).unwrap();
            assert!(p <= prev);
            prev = p;
        }
        assert_eq!(ks_p_value(0.0, 100).unwrap(), 1.0);
    }

    #[test]
    fn null_calibration_rejection_rate() {
        // 1000 repetitions of a 10^4-sample KS test under the null; the
        // rejection rate at level 0.01 stays in a loose band.
        let reps = 1000;
        let n = 10_000;
        let mut rejections = 0;
        for rep in 0..reps {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1000 + rep);
            let samples: Vec<f64> = (0..n)
                .map(|_| gumbel_quantile(rng.random::<f64>().max(1e-300).min(1.0 - 1e-16)).unwrap())
                .collect();
            let e = EmpiricalCdf::new(samples).unwrap();
            let d = ks_statistic(&e, gumbel_cdf).unwrap();
            if ks_p_value(d, n).unwrap() < 0.01 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        assert!((0.002..=0.03).contains(&rate), "rejection rate {rate}");
    }

    #[test]
    fn convergence_table_constant_input() {
        let vals: Vec<(String, f64)> = (0..4).map(|i| (format!("n{i}"), 2.5)).collect();
        let rows = convergence_table(&vals, None);
        assert!(rows[1..].iter().all(|r| r.delta == Some(0.0)));
    }

    #[test]
    fn convergence_table_with_limit() {
        let vals = vec![
            ("a".to_string(), 1.0),
            ("b".to_string(), 0.8),
            ("c".to_string(), 0.7),
        ];
        let rows = convergence_table(&vals, Some(0.6));
        assert_eq!(rows[0].gap_to_limit, Some(0.4));
        assert!((rows[1].gap_ratio.unwrap() - 0.5).abs() < 1e-15);
        assert!((rows[2].gap_ratio.unwrap() - 0.5).abs() < 1e-15);
    }
}
