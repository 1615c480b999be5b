//! Direct search over scaled Blaschke products, independent of the Pick matrix.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PickData, PickError};

/// A search counts as interpolating when every residual is below this.
pub const ORACLE_RESIDUAL: f64 = 1e-6;

const SEED: u64 = 0x005e_ed0f_b1a5;
const MIN_STEP: f64 = 1e-11;
const MAX_SWEEPS: usize = 4000;
const BISECTION_WIDTH: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    /// Least norm `s` at which some `s * B` interpolated within [`ORACLE_RESIDUAL`].
    pub norm: f64,
    pub max_residual: f64,
    /// Degree of the Blaschke product that achieved it.
    pub degree: usize,
    /// The search budget ran out before any scale interpolated.
    pub budget_exhausted: bool,
}

/// Zeros are parametrized by unconstrained planar vectors pushed into the disc.
fn zero_from(x: f64, y: f64) -> Complex64 {
    let v = Complex64::new(x, y);
    let r = v.norm();
    if r == 0.0 {
        v
    } else {
        v * (r.tanh() / r)
    }
}

struct Problem<'a> {
    data: &'a PickData,
    scale: f64,
    degree: usize,
}

impl Problem<'_> {
    fn residuals(&self, params: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let phase = Complex64::from_polar(self.scale, params[0]);
        let zeros: Vec<Complex64> = (0..self.degree).map(|k| zero_from(params[1 + 2 * k], params[2 + 2 * k])).collect();
        self.data.nodes().iter().zip(self.data.targets()).map(move |(&z, &w)| {
            let b = zeros.iter().fold(phase, |acc, &a| acc * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z));
            (b - w).norm()
        })
    }

    fn objective(&self, params: &[f64]) -> f64 {
        self.residuals(params).map(|r| r * r).sum()
    }

    fn max_residual(&self, params: &[f64]) -> f64 {
        self.residuals(params).fold(0.0, f64::max)
    }

    /// Compass search from `start`.
    fn minimize(&self, mut x: Vec<f64>) -> Vec<f64> {
        let goal = (0.01 * ORACLE_RESIDUAL).powi(2);
        let mut best = self.objective(&x);
        let mut step = 0.5;
        let mut sweeps = 0;
        while step > MIN_STEP && best > goal && sweeps < MAX_SWEEPS {
            sweeps += 1;
            let mut improved = false;
            for i in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + sign * step;
                    let value = self.objective(&x);
                    if value < best {
                        best = value;
                        improved = true;
                        break;
                    }
                    x[i] = old;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        x
    }
}

/// First degree (and its residual) at which some restart interpolates at scale `s`.
fn interpolates(data: &PickData, s: f64, max_degree: usize, samples: usize) -> Option<(usize, f64)> {
    for degree in 0..=max_degree {
        let problem = Problem { data, scale: s, degree };
        for restart in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((degree as u64) << 32) ^ restart as u64);
            let start: Vec<f64> = (0..1 + 2 * degree)
                .map(|i| if i == 0 { rng.random_range(-3.2..3.2) } else { rng.random_range(-1.5..1.5) })
                .collect();
            let x = problem.minimize(start);
            let residual = problem.max_residual(&x);
            if residual < ORACLE_RESIDUAL {
                return Some((degree, residual));
            }
        }
    }
    None
}

/// Least sup norm `s` for which some `s * B`, with `B` a Blaschke product of
/// degree at most `max_degree` (unimodular constant included), matches every
/// target within [`ORACLE_RESIDUAL`]. Each candidate scale gets `samples`
/// seeded restarts per degree; the scale is bisected to width 1e-6.
pub fn brute_force_oracle(data: &PickData, max_degree: usize, samples: usize) -> Result<OracleEstimate, PickError> {
    if data.len() > 4 || max_degree > 4 {
        return Err(PickError::InvalidData("the oracle handles at most 4 nodes and degree 4".into()));
    }
    if samples == 0 {
        return Err(PickError::InvalidData("the oracle needs at least one sample".into()));
    }
    let lower = data.max_target();
    if lower == 0.0 {
        return Ok(OracleEstimate { norm: 0.0, max_residual: 0.0, degree: 0, budget_exhausted: false });
    }
    let mut lo = lower * (1.0 - 1e-3);
    let mut hi = lower;
    let mut found = interpolates(data, hi, max_degree, samples);
    let mut doublings = 0;
    while found.is_none() {
        if doublings == MAX_DOUBLINGS {
            return Ok(OracleEstimate { norm: hi, max_residual: f64::INFINITY, degree: 0, budget_exhausted: true });
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        found = interpolates(data, hi, max_degree, samples);
    }
    let (mut degree, mut max_residual) = found.expect("loop exits with a hit");
    if doublings == 0 {
        return Ok(OracleEstimate { norm: hi, max_residual, degree, budget_exhausted: false });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        match interpolates(data, mid, max_degree, samples) {
            Some((d, r)) => {
                hi = mid;
                degree = d;
                max_residual = r;
            }
            None => lo = mid,
        }
    }
    Ok(OracleEstimate { norm: hi, max_residual, degree, budget_exhausted: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(z: &[f64], w: &[f64]) -> PickData {
        PickData::new(
            z.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            w.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_point() {
        let est = brute_force_oracle(&data(&[0.0], &[0.3]), 2, 4).unwrap();
        assert!((est.norm - 0.3).abs() < 1e-3);
        assert_eq!(est.degree, 0);
    }

    #[test]
    fn identity_is_optimal() {
        let est = brute_force_oracle(&data(&[0.0, 0.5], &[0.0, 0.5]), 3, 8).unwrap();
        assert!(!est.budget_exhausted);
        assert!((est.norm - 1.0).abs() < 1e-3, "{est:?}");
    }

    #[test]
    fn limits() {
        assert!(brute_force_oracle(&data(&[0.0], &[0.3]), 5, 4).is_err());
        let zero = brute_force_oracle(&data(&[0.0], &[0.0]), 1, 1).unwrap();
        assert_eq!(zero.norm, 0.0);
    }
}
