use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::{separating_family, step1, step2};
use super::{AlgebraContext, CombineError};
use crate::funcalg::{boundary_sup, Expr, NormCertificate};
use crate::peak::{self, BoundaryData, CERT_GRID};
use crate::pick::{build_pick_matrix, is_psd, solve_pick, PickData, PickError, PsdVerdict};

/// Convergence tolerance of combined-solution certificates.
pub const COMBINED_CERT_TOL: f64 = 1e-6;

/// The disc algebra on the closed unit disc, with boundary sets finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscContext {
    /// Boundary grid used by the interpolation primitive's power search.
    pub grid: usize,
    pub cert_tol: f64,
}

impl Default for DiscContext {
    fn default() -> Self {
        DiscContext { grid: CERT_GRID, cert_tol: COMBINED_CERT_TOL }
    }
}

impl AlgebraContext for DiscContext {
    type Point = Complex64;
    type Function = Expr;
    type Boundary = BoundaryData;

    fn evaluate(&self, f: &Expr, x: Complex64) -> Result<Complex64, CombineError> {
        Ok(f.eval(x)?)
    }

    fn norm_estimate(&self, f: &Expr) -> Result<NormCertificate, CombineError> {
        Ok(boundary_sup(f, self.cert_tol)?)
    }

    fn boundary_samples(&self, data: &BoundaryData) -> Vec<(Complex64, Complex64)> {
        data.samples()
    }

    fn peak_provider(&self, data: &BoundaryData) -> Expr {
        peak::peak_function(data.set()).expr
    }

    fn root_sequence(&self, peak: &Expr, m: u32) -> Result<Expr, CombineError> {
        let g = peak.affine(Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0))?;
        Ok(g.principal_root(m)?)
    }

    fn interpolation_primitive(
        &self,
        data: &BoundaryData,
        smallness: f64,
        region: &Expr,
        slack: f64,
    ) -> Result<Expr, CombineError> {
        Ok(peak::peak_interpolate(data, smallness, region, slack, self.grid)?.expr)
    }

    /// `k_j(z) = prod_{i != j} (z - a_i)`.
    fn separator(&self, j: usize, points: &[Complex64]) -> Result<Expr, CombineError> {
        let mut k = Expr::one();
        for (i, &a) in points.iter().enumerate() {
            if i != j {
                k = k.product(&Expr::identity().affine(Complex64::new(1.0, 0.0), -a)?);
            }
        }
        Ok(k)
    }

    fn constant(&self, c: Complex64) -> Result<Expr, CombineError> {
        Ok(Expr::constant(c)?)
    }

    fn is_zero(&self, f: &Expr) -> bool {
        f.is_zero()
    }

    fn add(&self, a: &Expr, b: &Expr) -> Expr {
        a.sum(b)
    }

    fn sub(&self, a: &Expr, b: &Expr) -> Expr {
        a.difference(b)
    }

    fn mul(&self, a: &Expr, b: &Expr) -> Expr {
        a.product(b)
    }

    fn scale(&self, a: &Expr, c: Complex64) -> Result<Expr, CombineError> {
        Ok(a.scale(c)?)
    }
}

/// Boundary data on a finite set `E`, interior nodes `a_j` with targets `w_j`,
/// and the norm slack `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedProblem {
    pub boundary: BoundaryData,
    pub interior: PickData,
    pub epsilon: f64,
}

impl CombinedProblem {
    pub fn new(boundary: BoundaryData, interior: PickData, epsilon: f64) -> Result<Self, CombineError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(CombineError::InvalidProblem(format!("epsilon must be positive and finite, got {epsilon}")));
        }
        Ok(CombinedProblem { boundary, interior, epsilon })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub epsilon: f64,
    /// Internal epsilon `epsilon / (1 + n M)` handed to the two steps.
    pub internal_epsilon: f64,
    /// Measured `M = max_j ||phi_j||`.
    pub separator_bound: f64,
    /// `1 + internal_epsilon (1 + n M)`.
    pub predicted_bound: f64,
    /// Certified sup of the first-step function `G`.
    pub step1_sup: f64,
    pub root_order: u32,
}

#[derive(Debug, Clone)]
pub struct CombinedSolution {
    pub f: Expr,
    /// `G` before the second-step correction.
    pub pre_correction: Expr,
    pub certificate: NormCertificate,
    pub boundary_residuals: Vec<f64>,
    pub interior_residuals: Vec<f64>,
    pub sigma: Vec<Complex64>,
    pub budget: BudgetReport,
}

pub fn solve_combined(problem: &CombinedProblem, tol: f64) -> Result<CombinedSolution, CombineError> {
    solve_combined_with(&DiscContext::default(), problem, tol)
}

/// Full pipeline on the disc: Pick feasibility, hypothesis function from the
/// Schur solver, separating family, epsilon budgeting, both steps, and a final
/// certificate. `tol` bounds the interpolation residuals and the PSD test.
pub fn solve_combined_with(
    ctx: &DiscContext,
    problem: &CombinedProblem,
    tol: f64,
) -> Result<CombinedSolution, CombineError> {
    let interior = &problem.interior;
    let (alphas, targets) = (interior.nodes(), interior.targets());
    let n = interior.len();

    let matrix = build_pick_matrix(interior);
    let check = is_psd(&matrix, tol)?;
    let infeasible = || CombineError::InfeasiblePick { min_eigenvalue: check.min_eigenvalue, matrix: matrix.rows() };
    if check.verdict == PsdVerdict::NotPsd {
        return Err(infeasible());
    }
    let l = match solve_pick(interior, tol) {
        Ok(result) => result.solution,
        Err(PickError::Unsolvable { .. }) => return Err(infeasible()),
        Err(e) => return Err(e.into()),
    };

    let family = separating_family(ctx, &problem.boundary, alphas)?;
    let internal = problem.epsilon / (1.0 + n as f64 * family.bound);
    let first = step1(ctx, &problem.boundary, alphas, targets, &l, internal)?;
    let step1_sup = ctx.norm_estimate(&first.expr)?.boundary_sup;
    let (f, sigma) = step2(ctx, &first.expr, &family, alphas, targets)?;

    let boundary_residuals = problem
        .boundary
        .samples()
        .into_iter()
        .map(|(z, v)| f.eval(z).map(|fz| (fz - v).norm()))
        .collect::<Result<Vec<_>, _>>()?;
    let interior_residuals = alphas
        .iter()
        .zip(targets)
        .map(|(&a, &w)| f.eval(a).map(|fa| (fa - w).norm()))
        .collect::<Result<Vec<_>, _>>()?;
    let certificate = ctx.norm_estimate(&f)?;
    let budget = BudgetReport {
        epsilon: problem.epsilon,
        internal_epsilon: internal,
        separator_bound: family.bound,
        predicted_bound: 1.0 + internal * (1.0 + n as f64 * family.bound),
        step1_sup,
        root_order: first.root_order,
    };
    let bound = 1.0 + problem.epsilon + certificate.tolerance;
    let passed = certificate.converged
        && certificate.boundary_sup <= bound
        && boundary_residuals.iter().chain(&interior_residuals).all(|&r| r <= tol);
    let solution =
        CombinedSolution { f, pre_correction: first.expr, certificate, boundary_residuals, interior_residuals, sigma, budget };
    if passed {
        Ok(solution)
    } else {
        Err(CombineError::CertificationFailed { solution: Box::new(solution), bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peak::FiniteBoundarySet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn boundary(angles: &[f64], values: &[Complex64]) -> BoundaryData {
        BoundaryData::new(FiniteBoundarySet::new(angles.to_vec()).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn separating_family_single_point() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(1.0, 0.0)]);
        let fam = separating_family(&ctx, &b, &[c(0.0, 0.0)]).unwrap();
        let phi = &fam.members[0];
        assert!((phi.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(phi.eval(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        // phi = 3 (1 - r) and |1 - r| <= 1/2
        assert!(fam.bound <= 1.5 + 1e-9);
        assert!((fam.bound - 1.5).abs() < 1e-6);
    }

    #[test]
    fn separating_family_two_points() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(1.0, 0.0)]);
        let alphas = [c(0.0, 0.0), c(0.5, 0.0)];
        let fam = separating_family(&ctx, &b, &alphas).unwrap();
        assert!(fam.members[0].eval(alphas[1]).unwrap().norm() <= 1e-12);
        assert!(fam.members[1].eval(alphas[0]).unwrap().norm() <= 1e-12);
        for (j, phi) in fam.members.iter().enumerate() {
            assert!((phi.eval(alphas[j]).unwrap() - c(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn step1_constant_hypothesis() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(1.0, 0.0)]);
        let alphas = [c(0.0, 0.0)];
        let targets = [c(0.3, 0.0)];
        let l = Expr::real(0.3).unwrap();
        let out = step1(&ctx, &b, &alphas, &targets, &l, 0.1).unwrap();
        // g(0) = (1/6)^(1/m) * 0.3
        let g0 = out.g.eval(c(0.0, 0.0)).unwrap();
        let expected = (1.0f64 / 6.0).powf(1.0 / f64::from(out.root_order)) * 0.3;
        assert!((g0 - c(expected, 0.0)).norm() < 1e-14);
        assert!((g0 - targets[0]).norm() < 0.05);
        assert_eq!(out.expr.eval(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((out.expr.eval(c(0.0, 0.0)).unwrap() - targets[0]).norm() < 0.05);
        assert!(ctx.norm_estimate(&out.expr).unwrap().boundary_sup <= 1.1 + COMBINED_CERT_TOL);
    }

    #[test]
    fn step1_zero_boundary_data() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0, 0.5], &[c(0.0, 0.0); 2]);
        let interior = PickData::new(vec![c(0.2, 0.1)], vec![c(0.4, 0.0)]).unwrap();
        let l = solve_pick(&interior, 1e-9).unwrap().solution;
        let out = step1(&ctx, &b, interior.nodes(), interior.targets(), &l, 0.1).unwrap();
        assert!(out.h.is_zero());
        assert_eq!(out.expr.eval(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(out.expr.eval(c(-1.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn step1_without_interior_points() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(0.5, 0.0)]);
        let out = step1(&ctx, &b, &[], &[], &Expr::zero(), 0.1).unwrap();
        assert_eq!(out.root_order, 1);
        assert_eq!(out.expr.eval(c(1.0, 0.0)).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn step1_rejects_bad_hypothesis() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(0.5, 0.0)]);
        let err = step1(&ctx, &b, &[c(0.0, 0.0)], &[c(0.3, 0.0)], &Expr::real(0.2).unwrap(), 0.1).unwrap_err();
        assert!(matches!(err, CombineError::Precondition(_)));
        let err = step1(&ctx, &b, &[], &[], &Expr::real(1.2).unwrap(), 0.1).unwrap_err();
        assert!(matches!(err, CombineError::Precondition(_)));
    }

    #[test]
    fn step2_corrections() {
        let ctx = DiscContext::default();
        let b = boundary(&[0.0], &[c(1.0, 0.0)]);
        let alphas = [c(0.0, 0.0)];
        let fam = separating_family(&ctx, &b, &alphas).unwrap();
        let g = peak::peak_function(b.set()).expr;
        // G(0) = 2/3; aim 0.05 lower
        let w = [c(2.0 / 3.0 - 0.05, 0.0)];
        let (f, sigma) = step2(&ctx, &g, &fam, &alphas, &w).unwrap();
        assert!((sigma[0] - c(0.05, 0.0)).norm() < 1e-15);
        assert!((f.eval(alphas[0]).unwrap() - w[0]).norm() < 1e-12);
        assert_eq!(f.eval(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        // exact targets need no correction
        let w = [c(2.0 / 3.0, 0.0)];
        let (f, sigma) = step2(&ctx, &g, &fam, &alphas, &w).unwrap();
        assert!(sigma[0].norm() < 1e-15);
        assert!((f.eval(alphas[0]).unwrap() - w[0]).norm() < 1e-15);
    }

    #[test]
    fn combined_pure_boundary() {
        let problem = CombinedProblem::new(boundary(&[0.0], &[c(0.5, 0.0)]), PickData::empty(), 0.1).unwrap();
        let sol = solve_combined(&problem, 1e-9).unwrap();
        assert_eq!(sol.f.eval(c(1.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(sol.certificate.boundary_sup <= 1.1);
    }

    #[test]
    fn combined_fixture() {
        let problem = CombinedProblem::new(
            boundary(&[0.0], &[c(1.0, 0.0)]),
            PickData::new(vec![c(0.0, 0.0)], vec![c(0.3, 0.0)]).unwrap(),
            0.1,
        )
        .unwrap();
        let sol = solve_combined(&problem, 1e-9).unwrap();
        assert!((sol.f.eval(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() <= 1e-10);
        assert!((sol.f.eval(c(0.0, 0.0)).unwrap() - c(0.3, 0.0)).norm() <= 1e-7);
        assert!(sol.certificate.boundary_sup <= 1.1 + COMBINED_CERT_TOL);
    }

    #[test]
    fn combined_infeasible() {
        let problem = CombinedProblem::new(
            boundary(&[0.0], &[c(1.0, 0.0)]),
            PickData::new(vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.0, 0.0), c(0.9, 0.0)]).unwrap(),
            0.1,
        )
        .unwrap();
        match solve_combined(&problem, 1e-9) {
            Err(CombineError::InfeasiblePick { min_eigenvalue, matrix }) => {
                assert!(min_eigenvalue < 0.0);
                assert_eq!(matrix.len(), 2);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }
}
