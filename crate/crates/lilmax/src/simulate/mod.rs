//! Monte Carlo engines: exact OU paths, local time, excursions, tail-sup
//! block sampling, and the random-walk demonstration.
//!
//! Every engine is a pure function of `(configuration, RngStream)`;
//! replicates run on disjoint substreams so aggregation is independent of
//! execution order and thread count.

mod excursions;
mod ou;
mod rng;
mod tail_sampler;
mod walk;

pub use excursions::{
    count_exceedances, estimate_local_time, extract_excursions, ExcursionAccumulator,
    ExcursionRecord, LocalTimeAccumulator,
};
pub use ou::{ou_step, scan_ou, simulate_ou, OuPath, OuPathConfig, STORED_PATH_CAP};
pub use rng::RngStream;
pub use tail_sampler::{block_quantile, certified_cut, sample_tail_sup, TailSupSampler};
pub use walk::{random_walk_demo, random_walk_statistic};

use crate::asymptotics::AsymptoticsError;

/// Errors from the simulation layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulateError {
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: &'static str },
    /// Stored-path request exceeding the memory cap; stream instead.
    #[error("grid of {steps} steps exceeds the stored-path cap of {cap}; use streaming mode")]
    GridTooLarge { steps: u64, cap: u64 },
    /// The block cut leaves a non-negligible analytic remainder at the
    /// working threshold.
    #[error("cut {cut} too small: remainder exponent {remainder_exponent:e} exceeds {ceiling:e} at the working threshold")]
    CutTooSmall {
        cut: u64,
        remainder_exponent: f64,
        ceiling: f64,
    },
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

/// Summary of an OU excursion study at one band width, produced by a single
/// streaming pass (the path itself is not stored).
#[derive(Debug, Clone)]
pub struct OuStudy {
    pub config: OuPathConfig,
    pub total_time: f64,
    pub total_local_time: f64,
    /// `L_T / T`, to compare with the stationary density `1/sqrt(2 pi)`.
    pub local_time_rate: f64,
    pub excursions: Vec<ExcursionRecord>,
}

impl OuStudy {
    /// Runs the streaming pass: local time and excursion decomposition in
    /// one sweep.
    pub fn run(config: &OuPathConfig, stream: RngStream) -> Result<Self, SimulateError> {
        config.validate()?;
        let mut local = LocalTimeAccumulator::new(config.epsilon, config.step_h);
        let mut excursions = ExcursionAccumulator::new();
        scan_ou(config, stream, |t, x| {
            local.push(x);
            excursions.push(t, x, local.total());
        })?;
        let total_local_time = local.total();
        Ok(OuStudy {
            config: *config,
            total_time: config.horizon_t,
            total_local_time,
            local_time_rate: total_local_time / config.horizon_t,
            excursions: excursions.finish(config.horizon_t),
        })
    }

    /// Observed exceedance rate per unit local time at level `lambda`.
    pub fn exceedance_rate(&self, lambda: f64, two_sided: bool) -> f64 {
        count_exceedances(&self.excursions, lambda, two_sided) as f64 / self.total_local_time
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_matches_stored_path_processing() {
        let config = OuPathConfig {
            step_h: 0.001,
            horizon_t: 100.0,
            x0: Some(0.5),
            epsilon: 0.05,
        };
        let study = OuStudy::run(&config, RngStream::new(8, 1)).unwrap();
        let path = simulate_ou(&config, RngStream::new(8, 1)).unwrap();
        let lt = estimate_local_time(&path, config.epsilon);
        let exc = extract_excursions(&path, &lt);
        assert_eq!(study.excursions.len(), exc.len());
        assert!((study.total_local_time - lt.last().unwrap()).abs() < 1e-9);
        for (a, b) in study.excursions.iter().zip(exc.iter()) {
            assert_eq!(a.peak, b.peak);
        }
    }

    #[test]
    fn local_time_rate_near_stationary_density_at_desk_scale() {
        let config = OuPathConfig {
            step_h: 1e-3,
            horizon_t: 2_000.0,
            x0: None,
            epsilon: 0.05,
        };
        let study = OuStudy::run(&config, RngStream::new(7, 0)).unwrap();
        let density = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let rel = (study.local_time_rate / density - 1.0).abs();
        assert!(rel < 0.10, "rate {} vs {density}", study.local_time_rate);
    }
}
