use num_complex::Complex64;

use super::{PickData, PickError};
use crate::funcalg::{boundary_sup, Expr, NormCertificate};

/// Convergence tolerance of the sup-norm certificate attached to Pick solutions.
pub const PICK_CERT_TOL: f64 = 1e-7;

/// Once a target is unimodular, the remaining targets must match it this closely.
pub const MARGINAL_MATCH: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub solution: Expr,
    pub residuals: Vec<f64>,
    pub norm_certificate: NormCertificate,
    /// Some Schur step met a unimodular target within tolerance.
    pub marginal: bool,
}

impl SolverResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `phi_a(v) = (v - a) / (1 - conj(a) v)`.
fn disc_automorphism(a: Complex64, v: Complex64) -> Complex64 {
    (v - a) / (Complex64::new(1.0, 0.0) - a.conj() * v)
}

fn reduce(nodes: &[Complex64], targets: &[Complex64], depth: usize, tol: f64) -> Result<(Expr, bool), PickError> {
    let (Some(&z1), Some(&w1)) = (nodes.first(), targets.first()) else {
        return Ok((Expr::zero(), false));
    };
    let modulus = w1.norm();
    if (modulus - 1.0).abs() <= tol {
        // A unimodular value at an interior point forces a constant.
        if let Some(w) = targets[1..].iter().find(|w| (*w - w1).norm() > MARGINAL_MATCH) {
            return Err(PickError::Unsolvable { depth: depth + 1, modulus: w.norm() });
        }
        let forced = if modulus > 1.0 { w1 / modulus } else { w1 };
        return Ok((Expr::constant(forced)?, true));
    }
    if modulus > 1.0 + tol {
        return Err(PickError::Unsolvable { depth, modulus });
    }
    let reduced: Vec<Complex64> = nodes[1..]
        .iter()
        .zip(&targets[1..])
        .map(|(&z, &w)| disc_automorphism(w1, w) / disc_automorphism(z1, z))
        .collect();
    let (inner, marginal) = reduce(&nodes[1..], &reduced, depth + 1, tol)?;
    let blaschke = Expr::identity().mobius(z1)?;
    let f = blaschke.product(&inner).mobius(-w1)?;
    Ok((f, marginal))
}

/// Schur reduction with the zero function as base case.
///
/// Each step peels off the first node: targets are moved by the disc automorphism
/// sending `w_1` to 0 and divided by the Blaschke factor vanishing at `z_1`; the
/// solution of the smaller problem is multiplied back by that factor and mapped
/// back with the inverse automorphism.
pub fn solve_pick(data: &PickData, tol: f64) -> Result<SolverResult, PickError> {
    let (solution, marginal) = reduce(data.nodes(), data.targets(), 0, tol)?;
    let residuals = data
        .nodes()
        .iter()
        .zip(data.targets())
        .map(|(&z, &w)| solution.eval(z).map(|v| (v - w).norm()))
        .collect::<Result<Vec<_>, _>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    if !marginal && max_residual > tol {
        return Err(PickError::ResidualCheck { max_residual });
    }
    let norm_certificate = boundary_sup(&solution, PICK_CERT_TOL)?;
    Ok(SolverResult { solution, residuals, norm_certificate, marginal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn data(z: &[f64], w: &[f64]) -> PickData {
        PickData::new(z.iter().map(|&x| c(x, 0.0)).collect(), w.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn empty_and_single_point() {
        let r = solve_pick(&PickData::empty(), 1e-9).unwrap();
        assert!(r.solution.is_zero());
        let r = solve_pick(&data(&[0.0], &[0.0]), 1e-9).unwrap();
        assert!(r.solution.is_zero());
        let r = solve_pick(&data(&[0.0], &[0.3]), 1e-9).unwrap();
        assert_eq!(r.solution.as_constant(), Some(c(0.3, 0.0)));
        assert!(!r.marginal);
    }

    #[test]
    fn forced_identity() {
        let r = solve_pick(&data(&[0.0, 0.5], &[0.0, 0.5]), 1e-9).unwrap();
        assert!(r.marginal);
        assert_eq!(r.solution, Expr::identity());
    }

    #[test]
    fn schwarz_violation_is_unsolvable() {
        let err = solve_pick(&data(&[0.0, 0.5], &[0.0, 0.9]), 1e-9).unwrap_err();
        // reduced target 0.9 / 0.5 = 1.8 at depth 1
        assert_eq!(err, PickError::Unsolvable { depth: 1, modulus: 0.9 / 0.5 });
        assert!(matches!(solve_pick(&data(&[0.2], &[1.5]), 1e-9), Err(PickError::Unsolvable { depth: 0, .. })));
    }

    #[test]
    fn unimodular_first_target_needs_constant_rest() {
        assert!(solve_pick(&data(&[0.0, 0.5], &[1.0, 1.0]), 1e-9).unwrap().marginal);
        assert!(matches!(
            solve_pick(&data(&[0.0, 0.5], &[1.0, 0.5]), 1e-9),
            Err(PickError::Unsolvable { depth: 1, .. })
        ));
    }

    #[test]
    fn three_points_interpolated_within_the_unit_ball() {
        let d = PickData::new(
            vec![c(0.1, 0.2), c(-0.4, 0.3), c(0.5, -0.5)],
            vec![c(0.2, 0.1), c(-0.1, 0.3), c(0.3, -0.2)],
        )
        .unwrap();
        let r = solve_pick(&d, 1e-9).unwrap();
        assert!(!r.marginal);
        assert!(r.max_residual() < 1e-12);
        assert!(r.norm_certificate.boundary_sup <= 1.0 + 1e-9);
    }
}
