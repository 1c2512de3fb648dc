//! Exact laws and Monte Carlo engines for the extreme-value refinement of the
//! law of the iterated logarithm.
//!
//! The running supremum `sup_{s>=t} B(s)/sqrt(2 s ln ln s)` of a Brownian
//! motion converges to 1. After centering with the sequence
//! `phi_n(x) = (3/2) L2(n) - L3(n) - ln(3/sqrt 2) + x` and scaling by
//! `2 ln n`, the fluctuation converges weakly to the Gumbel law
//! `exp(-e^{-x})`. Everything in that statement is computable, and this crate
//! computes it:
//!
//! - [`specfun`] — the Ornstein-Uhlenbeck scale function
//!   `S(x) = int_0^x exp(y^2/2) dy` (plain and log-domain), general diffusion
//!   scale functions by nested quadrature, the Gumbel distribution, and
//!   `Gamma(3/2, z)` for tail bounds.
//! - [`excursion`] — the law of the maximum of a diffusion excursion over one
//!   unit of local time at zero: CDF `exp(-f'(0) / (2 {f(l) - f(0)}))`, its
//!   two-sided variant, quantiles, and exact sampling.
//! - [`asymptotics`] — the exact law of `sup_{j>=n} M_j / sqrt(2 ln j)` as an
//!   infinite product with certified truncation error, the normalization
//!   sequences, Gumbel-limit diagnostics, the strong-law probability
//!   schedule, and the expectation ladder.
//! - [`simulate`] — reproducible Monte Carlo: exact OU transitions,
//!   occupation-density local time, excursion extraction, i.i.d. block
//!   sampling of the tail supremum, and a random-walk demonstration.
//! - [`stats`] — empirical CDFs, one-sample Kolmogorov-Smirnov statistics and
//!   p-values, and convergence tables.
//!
//! All computations are pure functions of their inputs (including RNG seeds);
//! nothing here keeps shared mutable state.

pub mod asymptotics;
pub(crate) mod chebyshev;
pub mod excursion;
pub mod simulate;
pub mod specfun;
pub mod stats;

pub use asymptotics::LogIndex;
pub use excursion::{ExcursionMaxLaw, Sided};
pub use specfun::LogReal;
