//! Exact-transition simulation of the Ornstein-Uhlenbeck process
//! `dX = dW - (1/2) X dt`.
//!
//! One step of size `h` is the exact Gaussian transition
//! `X_{t+h} = e^{-h/2} X_t + sqrt(1 - e^{-h}) Z`, so marginals carry no
//! discretization bias; only pathwise functionals (excursion peaks, band
//! occupation) keep an `O(sqrt h)` grid effect.

use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::RngStream;
use super::SimulateError;

/// Grid configuration for OU paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuPathConfig {
    /// Time step.
    pub step_h: f64,
    /// Horizon; the path has `horizon_t / step_h` steps.
    pub horizon_t: f64,
    /// Fixed start, or stationary `N(0,1)` start when `None`.
    pub x0: Option<f64>,
    /// Occupation band half-width for the local-time estimator.
    pub epsilon: f64,
}

impl OuPathConfig {
    /// Validates positivity and the band-resolution coupling
    /// `step_h <= epsilon^2` (the band must be visited many steps per
    /// crossing for the occupation estimator to converge).
    pub fn validate(&self) -> Result<(), SimulateError> {
        if !(self.step_h > 0.0) || !(self.horizon_t > 0.0) || !(self.epsilon > 0.0) {
            return Err(SimulateError::InvalidConfig {
                what: "step, horizon and epsilon must be positive",
            });
        }
        if self.step_h > self.epsilon * self.epsilon {
            return Err(SimulateError::InvalidConfig {
                what: "need step_h <= epsilon^2 so the band resolves crossings",
            });
        }
        Ok(())
    }

    pub fn steps(&self) -> u64 {
        (self.horizon_t / self.step_h).round() as u64
    }
}

/// One exact OU transition: mean `e^{-h/2} x`, variance `1 - e^{-h}`.
pub fn ou_step(x: f64, h: f64, z: f64) -> f64 {
    debug_assert!(h > 0.0);
    (-0.5 * h).exp() * x + (-(-h).exp_m1()).sqrt() * z
}

/// A stored OU path on a uniform grid (values only; times are `i * step_h`).
#[derive(Debug, Clone)]
pub struct OuPath {
    pub step_h: f64,
    pub values: Vec<f64>,
}

impl OuPath {
    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step_h
    }
}

/// Default cap on stored path samples (128 MB of values); longer runs must
/// stream through [`scan_ou`].
pub const STORED_PATH_CAP: u64 = 1 << 24;

/// Simulates and stores a path. Errors when the grid exceeds the memory cap.
pub fn simulate_ou(config: &OuPathConfig, stream: RngStream) -> Result<OuPath, SimulateError> {
    config.validate()?;
    let steps = config.steps();
    if steps > STORED_PATH_CAP {
        return Err(SimulateError::GridTooLarge {
            steps,
            cap: STORED_PATH_CAP,
        });
    }
    let mut values = Vec::with_capacity(steps as usize + 1);
    scan_ou(config, stream, |_, x| values.push(x))?;
    Ok(OuPath {
        step_h: config.step_h,
        values,
    })
}

/// Streams a path through a visitor without storing it: `visit(t, x)` is
/// called for every grid point including `t = 0`.
pub fn scan_ou<F: FnMut(f64, f64)>(
    config: &OuPathConfig,
    stream: RngStream,
    mut visit: F,
) -> Result<(), SimulateError> {
    config.validate()?;
    let mut rng = stream.rng();
    let mut x = match config.x0 {
        Some(v) => v,
        None => rng.sample(StandardNormal),
    };
    visit(0.0, x);
    let steps = config.steps();
    let h = config.step_h;
    let decay = (-0.5 * h).exp();
    let vol = (-(-h).exp_m1()).sqrt();
    for i in 1..=steps {
        let z: f64 = rng.sample(StandardNormal);
        x = decay * x + vol * z;
        visit(i as f64 * h, x);
    }
    Ok(())
}
