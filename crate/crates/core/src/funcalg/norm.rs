use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_finite, Expr, FuncError};

/// First boundary grid of the adaptive sup-norm search.
pub const GRID_START: usize = 1 << 10;
/// Largest boundary grid of the adaptive sup-norm search.
pub const GRID_CAP: usize = 1 << 20;

/// `exp(2 pi i t)`, exact at multiples of a quarter turn.
pub fn turns_to_point(t: f64) -> Complex64 {
    let t = t.rem_euclid(1.0);
    let quarter = ((4.0 * t).floor() as u8).min(3);
    let base = Complex64::from_polar(1.0, TAU * (t - f64::from(quarter) * 0.25));
    match quarter {
        0 => base,
        1 => Complex64::new(-base.im, base.re),
        2 => Complex64::new(-base.re, -base.im),
        _ => Complex64::new(base.im, -base.re),
    }
}

/// `n` equally spaced points on the unit circle starting at 1.
pub fn boundary_grid(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| turns_to_point(k as f64 / n as f64)).collect()
}

/// Polar grid with radii `k / radial` (`k < radial`) and `angular` angles.
pub fn interior_grid(radial: usize, angular: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(radial * angular);
    for i in 0..radial {
        let rho = i as f64 / radial as f64;
        for j in 0..angular {
            pts.push(turns_to_point(j as f64 / angular as f64) * rho);
        }
    }
    pts
}

/// Grid-based estimate of the sup norm on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub grid_size: usize,
    pub boundary_sup: f64,
    pub refinement_history: Vec<(usize, f64)>,
    pub converged: bool,
    pub tolerance: f64,
}

impl NormCertificate {
    /// The certified value, or the certificate itself as an error when the
    /// refinement did not converge.
    pub fn require_converged(self) -> Result<f64, Box<NormCertificate>> {
        if self.converged {
            Ok(self.boundary_sup)
        } else {
            Err(Box::new(self))
        }
    }
}

fn modulus_at(expr: &Expr, z: Complex64) -> Result<f64, FuncError> {
    let v = expr.eval(z)?;
    if !is_finite(v) {
        return Err(FuncError::NonFinite);
    }
    Ok(v.norm())
}

/// Adaptive sup norm on the boundary: grids double from [`GRID_START`] until two
/// successive sups differ by less than `tol`, or [`GRID_CAP`] is reached, in which
/// case the certificate comes back with `converged == false`.
///
/// Each grid contains the previous one, so only the new midpoints are evaluated
/// and the history is non-decreasing.
pub fn boundary_sup(expr: &Expr, tol: f64) -> Result<NormCertificate, FuncError> {
    if !(tol > 0.0) {
        return Err(FuncError::InvalidTolerance(tol));
    }
    let mut n = GRID_START;
    let mut sup = boundary_grid(n)
        .into_iter()
        .map(|z| modulus_at(expr, z))
        .try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)))?;
    let mut history = vec![(n, sup)];
    let mut converged = false;
    while n < GRID_CAP {
        let fine = 2 * n;
        let mut next = sup;
        for k in (1..fine).step_by(2) {
            next = next.max(modulus_at(expr, turns_to_point(k as f64 / fine as f64))?);
        }
        let delta = next - sup;
        n = fine;
        sup = next;
        history.push((n, sup));
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(NormCertificate { grid_size: n, boundary_sup: sup, refinement_history: history, converged, tolerance: tol })
}

/// Sup of `|expr|` on a fixed grid of `n` boundary points.
pub fn boundary_sup_at(expr: &Expr, n: usize) -> Result<f64, FuncError> {
    boundary_grid(n).into_iter().map(|z| modulus_at(expr, z)).try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)))
}

/// Sup of `|expr|` on the polar grid of [`interior_grid`].
pub fn interior_sup(expr: &Expr, radial: usize, angular: usize) -> Result<f64, FuncError> {
    interior_grid(radial, angular)
        .into_iter()
        .map(|z| modulus_at(expr, z))
        .try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)))
}
