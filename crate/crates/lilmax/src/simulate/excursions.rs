//! Occupation-density local time and empirical excursion decomposition.

use super::ou::OuPath;

/// One maximal sign-constant segment of a discretized path between grid
/// sign changes. The boundary convention is the grid point itself: a sign
/// change at step `k` ends one excursion and starts the next at `t_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcursionRecord {
    pub start_time: f64,
    pub end_time: f64,
    /// Signed extremum over the grid points of the segment: the maximum on
    /// positive excursions, the minimum on negative ones.
    pub peak: f64,
    /// Value of the cumulative local-time estimate when the segment starts.
    pub local_time_at_start: f64,
}

/// Streaming occupation-density estimator
/// `L_t = (1/2 eps) sum h 1{|X| <= eps}`: nondecreasing, grows only inside
/// the band.
#[derive(Debug, Clone)]
pub struct LocalTimeAccumulator {
    epsilon: f64,
    step_h: f64,
    total: f64,
}

impl LocalTimeAccumulator {
    pub fn new(epsilon: f64, step_h: f64) -> Self {
        LocalTimeAccumulator {
            epsilon,
            step_h,
            total: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x.abs() <= self.epsilon {
            self.total += self.step_h / (2.0 * self.epsilon);
        }
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Streaming excursion extractor: feed grid points in order, collect
/// completed sign-constant segments.
#[derive(Debug, Clone)]
pub struct ExcursionAccumulator {
    current_sign: i8,
    start_time: f64,
    peak: f64,
    local_time_at_start: f64,
    records: Vec<ExcursionRecord>,
}

impl ExcursionAccumulator {
    pub fn new() -> Self {
        ExcursionAccumulator {
            current_sign: 0,
            start_time: 0.0,
            peak: 0.0,
            local_time_at_start: 0.0,
            records: Vec::new(),
        }
    }

    fn sign_of(x: f64) -> i8 {
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn push(&mut self, t: f64, x: f64, local_time: f64) {
        let s = Self::sign_of(x);
        if s == self.current_sign {
            if self.current_sign != 0 {
                self.peak = if s > 0 {
                    self.peak.max(x)
                } else {
                    self.peak.min(x)
                };
            }
            return;
        }
        // Sign change at this grid point: close the open segment here and
        // start the next one at the same point.
        self.close_at(t);
        self.current_sign = s;
        self.start_time = t;
        self.peak = x;
        self.local_time_at_start = local_time;
    }

    fn close_at(&mut self, t: f64) {
        // Zero-length fragments (a lone grid point at the horizon) are dropped.
        if self.current_sign != 0 && t > self.start_time {
            self.records.push(ExcursionRecord {
                start_time: self.start_time,
                end_time: t,
                peak: self.peak,
                local_time_at_start: self.local_time_at_start,
            });
        }
    }

    /// Closes the final open segment (at the path horizon) and returns all
    /// records.
    pub fn finish(mut self, horizon: f64) -> Vec<ExcursionRecord> {
        self.close_at(horizon);
        self.records
    }

    pub fn completed(&self) -> &[ExcursionRecord] {
        &self.records
    }
}

impl Default for ExcursionAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// Cumulative local time of a stored path at every grid point.
pub fn estimate_local_time(path: &OuPath, epsilon: f64) -> Vec<f64> {
    let mut acc = LocalTimeAccumulator::new(epsilon, path.step_h);
    path.values
        .iter()
        .map(|&x| {
            acc.push(x);
            acc.total()
        })
        .collect()
}

/// Excursion records of a stored path, given its cumulative local time.
pub fn extract_excursions(path: &OuPath, local_time: &[f64]) -> Vec<ExcursionRecord> {
    assert_eq!(path.values.len(), local_time.len());
    let mut acc = ExcursionAccumulator::new();
    for (i, &x) in path.values.iter().enumerate() {
        acc.push(path.time(i), x, local_time[i]);
    }
    acc.finish(path.time(path.values.len().saturating_sub(1)))
}

/// Exceedance counts from an excursion list: the number of one-sided
/// (`peak > lambda`) or two-sided (`|peak| > lambda`) excursions.
pub fn count_exceedances(records: &[ExcursionRecord], lambda: f64, two_sided: bool) -> usize {
    records
        .iter()
        .filter(|r| {
            if two_sided {
                r.peak.abs() > lambda
            } else {
                r.peak > lambda
            }
        })
        .count()
}
