//! Peak functions and boundary interpolation for finite subsets of the circle.
//!
//! For `E = {zeta_1, .., zeta_N}` the function
//! `H(z) = 1 + sum_k (zeta_k + z) / (zeta_k - z)` has real part at least 1 on the
//! closed disc away from `E` and blows up at each `zeta_k`, so `r = H / (1 + H)`
//! belongs to the disc algebra, equals 1 on `E` and has modulus below 1 elsewhere.

use num_complex::Complex64;
use thiserror::Error;

use crate::funcalg::{boundary_grid, is_finite, turns_to_point, Expr, FuncError};

/// Minimum circular separation of boundary angles, in turns.
pub const ANGLE_SEPARATION: f64 = 1e-10;
/// Largest power of the peak function tried by [`peak_interpolate`].
pub const POWER_CAP: u32 = 1 << 20;
/// Boundary grid used to certify interpolants unless a caller picks another.
pub const CERT_GRID: usize = 16384;
/// Above this many nodes the Lagrange interpolant is reported as ill-conditioned.
pub const LAGRANGE_WARN_NODES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeakError {
    #[error("invalid boundary set: {0}")]
    InvalidSet(String),
    #[error("invalid boundary data: {0}")]
    InvalidData(String),
    #[error("no power up to {cap} certified the interpolant (last grid sup {last_sup}, worst off-region value {last_off_region})")]
    PowerCapExhausted { cap: u32, last_sup: f64, last_off_region: f64 },
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Finite subset of the unit circle, stored as angles in turns in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBoundarySet {
    angles: Vec<f64>,
}

impl FiniteBoundarySet {
    pub fn new(angles: Vec<f64>) -> Result<Self, PeakError> {
        if angles.is_empty() {
            return Err(PeakError::InvalidSet("at least one point is required".into()));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(PeakError::InvalidSet("non-finite angle".into()));
        }
        let angles: Vec<f64> = angles.into_iter().map(|a| a.rem_euclid(1.0)).collect();
        for (i, a) in angles.iter().enumerate() {
            for b in &angles[i + 1..] {
                let d = (a - b).abs();
                if d.min(1.0 - d) <= ANGLE_SEPARATION {
                    return Err(PeakError::InvalidSet(format!("angles {a} and {b} coincide")));
                }
            }
        }
        Ok(FiniteBoundarySet { angles })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.angles.iter().map(|&t| turns_to_point(t)).collect()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Distance from `z` to the nearest point of the set.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.points().iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Values `f(zeta_k)` on a finite boundary set, with `max |f| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    set: FiniteBoundarySet,
    values: Vec<Complex64>,
}

impl BoundaryData {
    pub fn new(set: FiniteBoundarySet, values: Vec<Complex64>) -> Result<Self, PeakError> {
        if values.len() != set.len() {
            return Err(PeakError::InvalidData(format!("{} points but {} values", set.len(), values.len())));
        }
        if values.iter().any(|&v| !is_finite(v)) {
            return Err(PeakError::InvalidData("non-finite value".into()));
        }
        let norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if norm > 1.0 {
            return Err(PeakError::InvalidData(format!("boundary values have norm {norm} > 1")));
        }
        Ok(BoundaryData { set, values })
    }

    pub fn set(&self) -> &FiniteBoundarySet {
        &self.set
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(zeta_k, f(zeta_k))` pairs.
    pub fn samples(&self) -> Vec<(Complex64, Complex64)> {
        self.set.points().into_iter().zip(self.values.iter().copied()).collect()
    }
}

/// A function equal to 1 on its set and of modulus below 1 elsewhere on the closed disc.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakFunction {
    pub expr: Expr,
    pub set: FiniteBoundarySet,
}

impl PeakFunction {
    pub fn eval(&self, z: Complex64) -> Result<Complex64, FuncError> {
        self.expr.eval(z)
    }
}

pub fn peak_function(set: &FiniteBoundarySet) -> PeakFunction {
    let expr = Expr::peak(set.angles()).expect("validated boundary sets are nonempty and finite");
    PeakFunction { expr, set: set.clone() }
}

/// `f_m = ((1 - r) / 2)^(1/m)`: vanishes on the set, has norm at most 1, and
/// increases to 1 in modulus at every other point as `m` grows.
pub fn root_sequence(r: &PeakFunction, m: u32) -> Result<Expr, PeakError> {
    let g = r.expr.affine(Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0))?;
    Ok(g.principal_root(m)?)
}

/// The polynomial of degree below `N` through `(zeta_k, f(zeta_k))`.
pub fn lagrange_boundary(data: &BoundaryData) -> Result<Expr, PeakError> {
    let points = data.set().points();
    if points.len() > LAGRANGE_WARN_NODES {
        log::warn!("Lagrange interpolation on {} boundary nodes may be ill-conditioned", points.len());
    }
    let mut total = Expr::zero();
    for (k, (&zk, &fk)) in points.iter().zip(data.values()).enumerate() {
        if fk == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut term = Expr::constant(fk)?;
        for (i, &zi) in points.iter().enumerate() {
            if i == k {
                continue;
            }
            let inv = Complex64::new(1.0, 0.0) / (zk - zi);
            term = term.product(&Expr::identity().affine(inv, -zi * inv)?);
        }
        total = total.sum(&term);
    }
    Ok(total)
}

/// Result of [`peak_interpolate`].
#[derive(Debug, Clone)]
pub struct PeakInterpolant {
    pub expr: Expr,
    /// Power of the peak function used; 0 for the all-zero shortcut.
    pub power: u32,
    /// Max of `|h|` over the certification grid.
    pub grid_sup: f64,
}

/// `h = p * r^m` with `p` the Lagrange interpolant and `r` the peak function.
///
/// `m` doubles from 1 until the certification grid shows `|h| <= 1 + slack`
/// everywhere and `|h| < smallness` wherever `|avoid| >= smallness`. Since
/// `r = 1` on the set, `h` keeps the boundary values of `p`.
pub fn peak_interpolate(
    data: &BoundaryData,
    smallness: f64,
    avoid: &Expr,
    slack: f64,
    grid: usize,
) -> Result<PeakInterpolant, PeakError> {
    if !(smallness > 0.0) || !(slack >= 0.0) || grid == 0 {
        return Err(PeakError::InvalidData("smallness must be positive, slack non-negative, grid nonempty".into()));
    }
    if data.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Ok(PeakInterpolant { expr: Expr::zero(), power: 0, grid_sup: 0.0 });
    }
    let p = lagrange_boundary(data)?;
    let r = peak_function(data.set());
    struct Sample {
        p: Complex64,
        r: Complex64,
        outside: bool,
    }
    let samples = boundary_grid(grid)
        .into_iter()
        .map(|z| {
            Ok(Sample { p: p.eval(z)?, r: r.eval(z)?, outside: avoid.eval(z)?.norm() >= smallness })
        })
        .collect::<Result<Vec<_>, FuncError>>()?;
    let mut m = 1u32;
    let (mut last_sup, mut last_off) = (f64::INFINITY, f64::INFINITY);
    while m <= POWER_CAP {
        let mut sup = 0.0f64;
        let mut off = 0.0f64;
        for s in &samples {
            let v = (s.p * s.r.powu(m)).norm();
            sup = sup.max(v);
            if s.outside {
                off = off.max(v);
            }
        }
        if sup <= 1.0 + slack && off < smallness {
            let expr = p.product(&r.expr.pow(m));
            return Ok(PeakInterpolant { expr, power: m, grid_sup: sup });
        }
        (last_sup, last_off) = (sup, off);
        m *= 2;
    }
    Err(PeakError::PowerCapExhausted { cap: POWER_CAP, last_sup, last_off_region: last_off })
}
