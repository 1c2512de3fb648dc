//! Random-walk demonstration of the Gumbel refinement.
//!
//! For a Rademacher walk `S_k` (zero mean, unit variance, all moments), the
//! statistic
//!
//! ```text
//! 2 L2(n) ( sup_{n<=k<=H} S_k / sqrt(2 k L2 k) - 1 ) - (3/2) L3(n) + L4(n) + ln(3/sqrt2)
//! ```
//!
//! is the finite-horizon surrogate of the quantity that converges weakly to
//! the Gumbel law. The horizon truncation is substantial at desk scale (the
//! untruncated supremum runs over all `k >= n`), so outputs are qualitative.

use rand::Rng;
use rayon::prelude::*;

use super::rng::RngStream;
use super::SimulateError;
use crate::asymptotics::LN_3_OVER_SQRT_2;

/// Precomputed `1/sqrt(2 k L2 k)` for `k` in `[n, horizon]`.
fn weights(n: u64, horizon: u64) -> Vec<f64> {
    (n..=horizon)
        .map(|k| {
            let kf = k as f64;
            1.0 / (2.0 * kf * kf.ln().ln()).sqrt()
        })
        .collect()
}

fn centered_statistic(n: u64, sup: f64) -> f64 {
    let l2 = (n as f64).ln().ln();
    let l3 = l2.ln();
    let l4 = l3.ln();
    2.0 * l2 * (sup - 1.0) - 1.5 * l3 + l4 + LN_3_OVER_SQRT_2
}

fn validate(n: u64, horizon: u64) -> Result<(), SimulateError> {
    if n < 16 {
        return Err(SimulateError::InvalidConfig {
            what: "walk start n must be >= 16 so L4 is defined",
        });
    }
    if horizon < n || horizon > 1_000_000_000 {
        return Err(SimulateError::InvalidConfig {
            what: "walk horizon must satisfy n <= horizon <= 1e9",
        });
    }
    Ok(())
}

fn statistic_with_weights(n: u64, horizon: u64, w: &[f64], stream: RngStream) -> f64 {
    let mut rng = stream.rng();
    let mut s: i64 = 0;
    let mut k: u64 = 0;
    let mut sup = f64::NEG_INFINITY;
    'outer: loop {
        let mut bits: u64 = rng.random();
        for _ in 0..64 {
            s += if bits & 1 == 1 { 1 } else { -1 };
            bits >>= 1;
            k += 1;
            if k >= n {
                let r = s as f64 * w[(k - n) as usize];
                if r > sup {
                    sup = r;
                }
            }
            if k == horizon {
                break 'outer;
            }
        }
    }
    centered_statistic(n, sup)
}

/// One replicate of the finite-horizon walk statistic.
pub fn random_walk_statistic(n: u64, horizon: u64, stream: RngStream) -> Result<f64, SimulateError> {
    validate(n, horizon)?;
    let w = weights(n, horizon);
    Ok(statistic_with_weights(n, horizon, &w, stream))
}

/// Replicated demo run: weights are shared, replicates run on independent
/// substreams in parallel, output order is deterministic.
pub fn random_walk_demo(
    n: u64,
    horizon: u64,
    replicates: u64,
    base: RngStream,
) -> Result<Vec<f64>, SimulateError> {
    validate(n, horizon)?;
    let w = weights(n, horizon);
    Ok((0..replicates)
        .into_par_iter()
        .map(|i| statistic_with_weights(n, horizon, &w, base.substream(i)))
        .collect())
}
