//! Numerical kernels for variable-order fractional calculus on 1-D grids.
//!
//! The crate bundles the pieces needed to experiment with spatially varying
//! differentiation orders end to end:
//!
//! * [`grid`]: uniform grids, sampled functions, order fields, and a small
//!   synthetic function catalog (including a multifractal surrogate).
//! * [`deriv`]: Riemann-Liouville and Caputo derivatives with a variable
//!   order, plus the adaptive hybrid blend and a Grunwald-Letnikov oracle.
//! * [`levy`]: alpha-stable sampling, one-sided subordinator paths, and a
//!   Monte Carlo estimator for a log-regularized singular kernel.
//! * [`spaces`]: Gagliardo, Besov, Holder, and spectral Sobolev estimators
//!   together with an anisotropy penalty on order fields.
//! * [`wavelet`]: orthonormal Haar analysis, order-adapted thresholding,
//!   a priori error bounds, and local regularity estimation.
//! * [`prokhorov`]: an exact fractional Prokhorov distance for small
//!   discrete measures.
//! * [`qfgd`]: fractional-gradient descent with heavy-tailed exploration
//!   noise and classical baselines.
//! * [`elliptic`]: a spectral solver for the fractional Poisson problem on
//!   the unit interval with a regularity-transfer diagnostic.
//!
//! Everything is `no_std` + `alloc`; float transcendentals come from `libm`.
//! Randomized routines take explicit `u64` seeds and are bit-reproducible:
//! Monte Carlo loops consume counter-based ChaCha substreams in fixed chunk
//! order, so results do not depend on how chunks are scheduled.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod deriv;
pub mod elliptic;
pub mod error;
pub mod grid;
pub mod levy;
pub mod prokhorov;
pub mod qfgd;
pub mod spaces;
pub mod stats;
pub mod wavelet;

pub use error::{Error, Result};
pub use grid::{finite_diff, Grid1D, OrderField, RunConfig, SampledFn};
