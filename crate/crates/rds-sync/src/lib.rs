//! Simulation and statistical analysis of products of i.i.d. random circle maps.
//!
//! The system under study is a memoryless random dynamical system on the circle
//! S^1 = R/Z: fix a degree-1 lift `F : R -> R` (so `F(x+1) = F(x) + 1`) and let
//! each time step apply the randomized map
//!
//! ```text
//!     f_alpha([x]) = [F(x + alpha) - alpha],        alpha ~ Uniform[0, 1)
//! ```
//!
//! with the translation parameters alpha drawn independently at every step.
//! The n-step composition `phi(n, omega) = f_{alpha_n} o ... o f_{alpha_1}`
//! forms a cocycle over the shift on the noise sequence omega = (alpha_k).
//!
//! The toolkit numerically probes the three conditions that together
//! characterise stable synchronisation of such a system:
//!
//! 1. a unique minimal invariant set (approached via accessibility sampling),
//! 2. two-point contractibility (`P(d shrinks below its start) > 0`; ruled out
//!    exactly when the one-step map has a subperiod),
//! 3. existence of stable trajectories (negative Lyapunov exponent
//!    `lambda = \int_0^1 log|F'(y)| dy`).
//!
//! Modules:
//! - [`circle`]: points on R/Z and the arc-length metric.
//! - [`lift`]: degree-1 lifts (rotations and trigonometric polynomials),
//!   randomized application, derivatives, exact subperiod detection.
//! - [`quadrature`]: adaptive Gauss-Legendre integration of `log|F'|`,
//!   singularity-aware, for the Lyapunov exponent.
//! - [`noise`]: counter-based deterministic uniform noise streams.
//! - [`engine`]: cocycle iteration, two-point motion, ensembles.
//! - [`stats`]: small estimation utilities (CIs, quantiles, KS distance,
//!   circular means, rational reconstruction, low-discrepancy pairs).
//! - [`analysis`]: Monte Carlo estimators for the three conditions and the
//!   combined verdict.
//! - [`pullback`]: pullback empirical measures, clustering, random fixed
//!   points.
//! - [`config`]: the experiment configuration file format.
//! - [`cli`]: experiment orchestration, CSV artifacts, run manifests.

pub mod analysis;
pub mod circle;
pub mod cli;
pub mod config;
pub mod engine;
pub mod lift;
pub mod noise;
pub mod pullback;
pub mod quadrature;
pub mod stats;

pub use circle::{circle_dist, CirclePoint};
pub use engine::{RandomMapSystem, TrajectoryEnsemble};
pub use lift::{FourierTerm, Lift, PeriodCount, SubperiodReport};
pub use noise::NoiseStream;
