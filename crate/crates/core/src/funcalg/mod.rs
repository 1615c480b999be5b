//! Functions in the disc algebra as immutable expression trees.
//!
//! An [`Expr`] denotes a function continuous on the closed unit disc and
//! holomorphic inside. Expressions are built from a small set of node kinds,
//! evaluated pointwise, serialized to JSON, and norm-certified by sampling
//! the boundary circle (maximum modulus principle).

mod expr;
mod norm;
mod serial;

pub use expr::{Expr, Node};
pub use norm::{
    boundary_grid, boundary_sup, boundary_sup_at, interior_grid, interior_sup, turns_to_point,
    NormCertificate, GRID_CAP, GRID_START,
};
pub use serial::{ComplexRecord, ExprDocument};

use num_complex::Complex64;
use thiserror::Error;

/// Evaluation points may exceed the unit circle by this much.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// A denominator smaller than this at evaluation time is a degenerate expression.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-15;

/// Quotients require a denominator modulus above this on the certification grid.
pub const QUOTIENT_FLOOR: f64 = 1e-6;

/// Allowed excursion of a principal-power argument outside the disc `|z - 1/2| <= 1/2`.
pub const RANGE_SLACK: f64 = 1e-9;

/// Points this close to a peak set evaluate to exactly 1.
pub const PEAK_SNAP: f64 = 1e-12;

/// Boundary points used for construction-time checks (quotients, root ranges).
pub const CHECK_GRID: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuncError {
    #[error("evaluation point {re} + {im}i lies outside the closed unit disc")]
    DomainViolation { re: f64, im: f64 },
    #[error("denominator vanished ({modulus:e}) at {re} + {im}i")]
    DegenerateExpression { modulus: f64, re: f64, im: f64 },
    #[error("non-finite scalar in expression input")]
    NonFinite,
    #[error("Mobius parameter must lie in the open unit disc, got modulus {0}")]
    MobiusParameter(f64),
    #[error("root order must be at least 1")]
    RootOrder,
    #[error("root argument leaves the disc |z - 1/2| <= 1/2 by {excess:e} at {re} + {im}i")]
    RangeViolation { excess: f64, re: f64, im: f64 },
    #[error("quotient denominator is not certified nonvanishing: {0}")]
    UncertifiedDenominator(String),
    #[error("invalid peak set: {0}")]
    PeakSet(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("expression document: {0}")]
    Parse(String),
}

/// True when both components are finite.
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
