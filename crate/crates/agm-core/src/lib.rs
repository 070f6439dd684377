//! First-order gradient methods with adaptive step-size and momentum
//! selection for strongly convex problems.
//!
//! The classical GD, Nesterov accelerated gradient (NAG), and heavy-ball
//! (HB) iterations reach their optimal linear rates only when the strong
//! convexity constant `mu` is known. This crate implements an adaptive
//! alternative: the per-iteration convergence factor is estimated from a
//! windowed geometric average of successive residual-norm ratios
//! ([`rate::RateEstimator`]), and the step size and momentum weight are
//! recomputed from that estimate each iteration ([`optimize`]).
//!
//! Supporting machinery:
//!
//! * [`linalg`] — dense vectors, SPD operators, and eigenvalue lists.
//! * [`oracle`] — exact spectral radii of the GD/NAG/HB iteration operators
//!   on known spectra, plus simulators of the rate-estimate recurrences.
//! * [`eigen`] — power iteration, shifted power iteration, and the Gram
//!   1-norm smoothness bound used to rescale problems.
//! * [`problems`] — benchmark objectives: diagonal quadratics with
//!   configurable spectra, L2-regularised logistic regression, and Huber-TV
//!   image denoising, plus a high-precision reference solver.
//!
//! The crate is `no_std`-compatible (`alloc` required): build with
//! `--no-default-features --features libm` to route float intrinsics
//! through [`libm`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("agm-core requires either the `std` feature or the `libm` feature");

mod math;

pub mod eigen;
pub mod linalg;
pub mod objective;
pub mod optimize;
pub mod oracle;
pub mod problems;
pub mod rate;
pub mod rng;

pub use objective::Objective;
