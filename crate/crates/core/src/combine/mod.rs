//! Combining interior Pick interpolation with boundary interpolation.
//!
//! The engine ([`step1`], [`separating_family`], [`step2`]) is written against
//! [`AlgebraContext`], which exposes only what the construction needs from a
//! uniform algebra: evaluation, norms, algebra operations, a peak function for
//! the boundary set, boundary interpolants and point separators. [`DiscContext`]
//! is the disc-algebra instance and [`solve_combined`] runs the full pipeline on it.

mod disc;
mod engine;

pub use disc::{
    solve_combined, solve_combined_with, BudgetReport, CombinedProblem, CombinedSolution, DiscContext,
    COMBINED_CERT_TOL,
};
pub use engine::{separating_family, step1, step2, SeparatingFamily, Step1Output, ROOT_CAP, SEPARATOR_FLOOR};

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::funcalg::{FuncError, NormCertificate};
use crate::peak::PeakError;
use crate::pick::PickError;

#[derive(Debug, Error)]
pub enum CombineError {
    #[error("interior data fail the Pick criterion (min eigenvalue {min_eigenvalue:e})")]
    InfeasiblePick { min_eigenvalue: f64, matrix: Vec<Vec<Complex64>> },
    #[error("no root order up to {cap} brought the interior values within {target:e} (worst miss {worst:e})")]
    RootSearchExhausted { cap: u32, target: f64, worst: f64 },
    #[error("precondition on the hypothesis function: {0}")]
    Precondition(String),
    #[error("separator {index} is degenerate at its node (modulus {modulus:e})")]
    DegenerateSeparator { index: usize, modulus: f64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("certification failed: sup {} against bound {bound}", .solution.certificate.boundary_sup)]
    CertificationFailed { solution: Box<CombinedSolution>, bound: f64 },
    #[error(transparent)]
    Peak(#[from] PeakError),
    #[error(transparent)]
    Pick(#[from] PickError),
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Capabilities of a uniform algebra on a compact space, as used by the
/// combination engine. All methods are pure.
pub trait AlgebraContext {
    type Point: Copy + fmt::Debug;
    type Function: Clone;
    /// A boundary set together with the values to interpolate on it.
    type Boundary;

    fn evaluate(&self, f: &Self::Function, x: Self::Point) -> Result<Complex64, CombineError>;
    /// Sup-norm estimate; no point evaluation exceeds it beyond its tolerance.
    fn norm_estimate(&self, f: &Self::Function) -> Result<NormCertificate, CombineError>;
    fn boundary_samples(&self, data: &Self::Boundary) -> Vec<(Self::Point, Complex64)>;
    /// A function equal to 1 on the boundary set and of modulus below 1 elsewhere.
    fn peak_provider(&self, data: &Self::Boundary) -> Self::Function;
    /// `((1 - peak) / 2)^(1/m)`.
    fn root_sequence(&self, peak: &Self::Function, m: u32) -> Result<Self::Function, CombineError>;
    /// An element matching the boundary values, of norm at most `1 + slack`, and
    /// of modulus below `smallness` wherever `|region| >= smallness`.
    fn interpolation_primitive(
        &self,
        data: &Self::Boundary,
        smallness: f64,
        region: &Self::Function,
        slack: f64,
    ) -> Result<Self::Function, CombineError>;
    /// An element vanishing at every point but `points[j]` and nonzero there.
    fn separator(&self, j: usize, points: &[Self::Point]) -> Result<Self::Function, CombineError>;

    fn constant(&self, c: Complex64) -> Result<Self::Function, CombineError>;
    fn is_zero(&self, f: &Self::Function) -> bool;
    fn add(&self, a: &Self::Function, b: &Self::Function) -> Self::Function;
    fn sub(&self, a: &Self::Function, b: &Self::Function) -> Self::Function;
    fn mul(&self, a: &Self::Function, b: &Self::Function) -> Self::Function;
    fn scale(&self, a: &Self::Function, c: Complex64) -> Result<Self::Function, CombineError>;
}
