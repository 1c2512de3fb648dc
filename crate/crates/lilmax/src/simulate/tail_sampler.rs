//! Monte Carlo sampling of `sup_{j>=n} M_j / sqrt(2 ln j)`.
//!
//! A replicate draws the excursion maxima `M_j` i.i.d. for the block
//! `j in [n, cut)` by inverse transform and resolves the infinite remainder
//! `j >= cut` with one draw from its exact analytic law, so the marginal
//! equals the [`TailSupLaw`] CDF exactly. The cut is certified by requiring
//! the remainder exponent to be below `1e-6` at the upper working threshold
//! (the 0.999 quantile of the full law); `cut == n` is the degenerate pure
//! analytic draw and needs no certificate.

use rand::Rng;
use rand_distr::Open01;
use rayon::prelude::*;

use crate::asymptotics::{CachedTailCdf, LogIndex, TailSupLaw};
use crate::chebyshev::PiecewiseChebyshev;
use crate::excursion::{ExcursionMaxLaw, Sided};
use crate::specfun::log_scale_ou_fast;

use super::rng::RngStream;
use super::SimulateError;

/// Remainder-exponent ceiling at the certification threshold.
const CUT_CERTIFICATION: f64 = 1e-6;

/// Prepared sampler for `sup_{j>=n} M_j / sqrt(2 ln j)`.
#[derive(Debug)]
pub struct TailSupSampler {
    n: u64,
    cut: u64,
    sided: Sided,
    /// `1/sqrt(2 ln j)` for `j` in `[n, cut)`.
    inv_norm: Vec<f64>,
    /// `lambda` as a function of `t = ln S(lambda)`: the base-law quantile in
    /// the coordinate `t = -ln(-ln u) + ln(m/2)`.
    scale_inverse: PiecewiseChebyshev,
    /// Remainder law beyond the cut, cached for inverse transforms.
    remainder: CachedTailCdf,
}

impl TailSupSampler {
    /// Builds the sampler. `n` must lie in `[3, 10^7]` and `cut` in
    /// `[n, n + 10^8]`.
    pub fn new(n: u64, cut: u64, sided: Sided) -> Result<Self, SimulateError> {
        if !(3..=10_000_000).contains(&n) {
            return Err(SimulateError::InvalidConfig {
                what: "block start n must lie in [3, 1e7]",
            });
        }
        if cut < n || cut - n > 100_000_000 {
            return Err(SimulateError::InvalidConfig {
                what: "cut must satisfy n <= cut <= n + 1e8",
            });
        }
        if cut > n {
            certify_cut(n, cut, sided)?;
        }
        let remainder_law = TailSupLaw::ou(LogIndex::from_n(cut)?, sided).with_tolerance(1e-7);
        let remainder = CachedTailCdf::new(&remainder_law)?;

        // Base-law quantile in the t = ln S coordinate. Uniforms in the open
        // unit interval at f64 resolution map to t in roughly
        // [-3.7, 36.8] + ln(m/2); pad generously.
        let m = sided.rate_multiplier();
        let t_lo = -4.8 + (0.5 * m).ln();
        let t_hi = 38.0 + (0.5 * m).ln();
        let scale_inverse = PiecewiseChebyshev::fit(invert_log_scale, t_lo, t_hi, 48);

        let inv_norm = (n..cut)
            .map(|j| 1.0 / (2.0 * (j as f64).ln()).sqrt())
            .collect();

        Ok(TailSupSampler {
            n,
            cut,
            sided,
            inv_norm,
            scale_inverse,
            remainder,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cut(&self) -> u64 {
        self.cut
    }

    /// One replicate: the block maximum over `[n, cut)` combined with one
    /// draw from the exact remainder law.
    pub fn sample(&self, stream: RngStream) -> f64 {
        let mut rng = stream.rng();
        let m_ln = (0.5 * self.sided.rate_multiplier()).ln();
        let mut best = f64::NEG_INFINITY;
        for &inv in &self.inv_norm {
            let u: f64 = rng.sample(Open01);
            let t = -(-u.ln()).ln() + m_ln;
            let r = self.scale_inverse.eval(t) * inv;
            if r > best {
                best = r;
            }
        }
        // Remainder: solve ln exponent(y) = ln(-ln u); decreasing in y.
        let u: f64 = rng.sample(Open01);
        let target = (-u.ln()).ln();
        let (mut lo, mut hi) = self.remainder.y_range();
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.remainder.ln_exponent(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best.max(0.5 * (lo + hi))
    }

    /// Independent replicates on substreams `0..replicates`, evaluated in
    /// parallel with deterministic, order-preserving output.
    pub fn sample_many(&self, base: RngStream, replicates: u64) -> Vec<f64> {
        (0..replicates)
            .into_par_iter()
            .map(|i| self.sample(base.substream(i)))
            .collect()
    }
}

/// Single-shot convenience wrapper around [`TailSupSampler`].
pub fn sample_tail_sup(
    n: u64,
    cut: u64,
    sided: Sided,
    stream: RngStream,
) -> Result<f64, SimulateError> {
    Ok(TailSupSampler::new(n, cut, sided)?.sample(stream))
}

/// Checks the remainder certification for a proposed cut: the remainder
/// exponent at the full law's 0.999 quantile must be below the ceiling.
fn certify_cut(n: u64, cut: u64, sided: Sided) -> Result<(), SimulateError> {
    let full = TailSupLaw::ou(LogIndex::from_n(n)?, sided)
        .with_tolerance(1e-7)
        .with_direct_cap(4096);
    let y999 = full.quantile_of_exponent(-(0.999f64.ln()))?;
    let at_cut = TailSupLaw::ou(LogIndex::from_n(cut)?, sided)
        .with_tolerance(1e-7)
        .with_direct_cap(4096)
        .tail_exponent(y999)
        .map_err(SimulateError::from)?
        .value
        .to_value();
    if at_cut > CUT_CERTIFICATION {
        return Err(SimulateError::CutTooSmall {
            cut,
            remainder_exponent: at_cut,
            ceiling: CUT_CERTIFICATION,
        });
    }
    Ok(())
}

/// The smallest cut of the form `n * 2^k` meeting the remainder
/// certification at start index `n`.
pub fn certified_cut(n: u64, sided: Sided) -> Result<u64, SimulateError> {
    let mut cut = n.saturating_mul(2);
    for _ in 0..40 {
        match certify_cut(n, cut, sided) {
            Ok(()) => return Ok(cut),
            Err(SimulateError::CutTooSmall { .. }) => {
                cut = cut.saturating_mul(2);
            }
            Err(e) => return Err(e),
        }
    }
    Err(SimulateError::InvalidConfig {
        what: "no certified cut below n * 2^40",
    })
}

/// Inverse of `lambda -> ln S(lambda)` by bisection on the fast kernel.
fn invert_log_scale(t: f64) -> f64 {
    let mut lo = 1e-12f64;
    let mut hi = 64.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_scale_ou_fast(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Exact inverse transform of the excursion-maximum law, the reference the
/// sampler's interpolant is validated against.
pub fn block_quantile(sided: Sided, u: f64) -> f64 {
    let law = ExcursionMaxLaw::ornstein_uhlenbeck(sided);
    law.quantile(u).expect("u in (0,1)")
}
