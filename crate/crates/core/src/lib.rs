//! Norm-constrained analytic interpolation in the disc algebra.
//!
//! Interior value constraints (Pick interpolation) are combined with exact
//! interpolation on a finite set of boundary points, with the sup norm held
//! below `1 + epsilon`:
//!
//! - [`funcalg`]: expression trees for disc-algebra functions, evaluation,
//!   JSON serialization and boundary sup-norm certificates;
//! - [`pick`]: Pick matrices, PSD verdicts, Schur synthesis and minimal norms;
//! - [`peak`]: peak functions for finite boundary sets, root sequences and
//!   boundary interpolation by high powers of peak functions;
//! - [`combine`]: the two-step combination engine, generic over an
//!   [`combine::AlgebraContext`] and instantiated for the disc;
//! - [`cli`]: JSON problem and report documents behind the `pickpeak` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod combine;
pub mod funcalg;
pub mod peak;
pub mod pick;

pub use num_complex::Complex64;
