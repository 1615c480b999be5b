//! Pick interpolation at interior points of the disc.
//!
//! [`build_pick_matrix`] and [`is_psd`] decide solvability, [`solve_pick`]
//! synthesizes a rational interpolant of norm at most one by Schur reduction,
//! [`minimal_norm`] bisects for the smallest achievable sup norm and
//! [`brute_force_oracle`] cross-checks it by direct search over Blaschke products.

mod minnorm;
mod oracle;
mod schur;

pub use minnorm::minimal_norm;
pub use oracle::{brute_force_oracle, OracleEstimate, ORACLE_RESIDUAL};
pub use schur::{solve_pick, SolverResult, MARGINAL_MATCH, PICK_CERT_TOL};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcalg::{is_finite, FuncError};

/// Minimum pairwise distance between interpolation nodes.
pub const NODE_SEPARATION: f64 = 1e-12;
/// Nodes must satisfy `|z| <= 1 - NODE_MARGIN`.
pub const NODE_MARGIN: f64 = 1e-10;
/// Width of the band between the psd and not-psd thresholds, in units of `tol`.
pub const MARGINAL_BAND: f64 = 1e3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PickError {
    #[error("invalid Pick data: {0}")]
    InvalidData(String),
    #[error("Hermitian eigensolver did not converge")]
    Eigensolver,
    #[error("unsolvable: reduced target of modulus {modulus} at recursion depth {depth}")]
    Unsolvable { depth: usize, modulus: f64 },
    #[error("interpolant misses a target by {max_residual:e}")]
    ResidualCheck { max_residual: f64 },
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Interior nodes `z_j` with targets `w_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PickData {
    nodes: Vec<Complex64>,
    targets: Vec<Complex64>,
}

impl PickData {
    pub fn new(nodes: Vec<Complex64>, targets: Vec<Complex64>) -> Result<Self, PickError> {
        if nodes.len() != targets.len() {
            return Err(PickError::InvalidData(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        if nodes.iter().chain(&targets).any(|&z| !is_finite(z)) {
            return Err(PickError::InvalidData("non-finite value".into()));
        }
        if let Some(z) = nodes.iter().find(|z| z.norm() > 1.0 - NODE_MARGIN) {
            return Err(PickError::InvalidData(format!("node {z} is not inside the disc")));
        }
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                if (a - b).norm() <= NODE_SEPARATION {
                    return Err(PickError::InvalidData(format!("nodes {a} and {b} coincide")));
                }
            }
        }
        Ok(PickData { nodes, targets })
    }

    pub fn empty() -> Self {
        PickData { nodes: vec![], targets: vec![] }
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn targets(&self) -> &[Complex64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same nodes with targets divided by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        PickData { nodes: self.nodes.clone(), targets: self.targets.iter().map(|w| w / t).collect() }
    }

    pub fn max_target(&self) -> f64 {
        self.targets.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}

/// Hermitian matrix, mirrored from its upper triangle at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j, k)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order()).map(|j| self.entries[(j, j)].re).sum()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Row-major entries, for reports.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.order()).map(|j| (0..self.order()).map(|k| self.entry(j, k)).collect()).collect()
    }
}

/// `(1 - w_j conj(w_k)) / (1 - z_j conj(z_k))`.
pub fn build_pick_matrix(data: &PickData) -> HermitianMatrix {
    let n = data.len();
    let (z, w) = (data.nodes(), data.targets());
    let one = Complex64::new(1.0, 0.0);
    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for j in 0..n {
        let diag = (1.0 - w[j].norm_sqr()) / (1.0 - z[j].norm_sqr());
        entries[(j, j)] = Complex64::new(diag, 0.0);
        for k in j + 1..n {
            let v = (one - w[j] * w[k].conj()) / (one - z[j] * z[k].conj());
            entries[(j, k)] = v;
            entries[(k, j)] = v.conj();
        }
    }
    HermitianMatrix { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsdVerdict {
    Psd,
    NotPsd,
    Marginal,
}

impl PsdVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PsdVerdict::Psd => "psd",
            PsdVerdict::NotPsd => "not-psd",
            PsdVerdict::Marginal => "marginal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub verdict: PsdVerdict,
    pub min_eigenvalue: f64,
    /// `1 + |trace|`, the scale the thresholds are measured in.
    pub scale: f64,
}

/// Verdict from the smallest eigenvalue: psd above `-tol * scale`, not-psd below
/// `-1e3 * tol * scale`, marginal in between, with `scale = 1 + |trace|`.
pub fn is_psd(m: &HermitianMatrix, tol: f64) -> Result<PsdCheck, PickError> {
    let scale = 1.0 + m.trace().abs();
    let min_eigenvalue = if m.order() == 0 {
        0.0
    } else {
        let eig = SymmetricEigen::try_new(m.entries.clone(), f64::EPSILON, 10_000).ok_or(PickError::Eigensolver)?;
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if !min.is_finite() {
            return Err(PickError::Eigensolver);
        }
        min
    };
    let verdict = if min_eigenvalue >= -tol * scale {
        PsdVerdict::Psd
    } else if min_eigenvalue < -MARGINAL_BAND * tol * scale {
        PsdVerdict::NotPsd
    } else {
        PsdVerdict::Marginal
    };
    Ok(PsdCheck { verdict, min_eigenvalue, scale })
}
