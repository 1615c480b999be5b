use super::{build_pick_matrix, is_psd, PickData, PickError, PsdVerdict};

/// PSD tolerance used when testing scaled data inside the bisection.
const FEASIBILITY_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 200;

fn feasible(data: &PickData, t: f64) -> Result<bool, PickError> {
    Ok(is_psd(&build_pick_matrix(&data.scaled(t)), FEASIBILITY_TOL)?.verdict == PsdVerdict::Psd)
}

/// Smallest `t` (to absolute width `tol`) for which `(z_j, w_j / t)` has a psd
/// Pick matrix, i.e. the least sup norm of an interpolant.
///
/// Feasibility is upward closed in `t`, and point evaluations bound the norm from
/// below, so bisection starts from `max |w_j|`.
pub fn minimal_norm(data: &PickData, tol: f64) -> Result<f64, PickError> {
    if data.is_empty() {
        return Err(PickError::InvalidData("minimal norm needs at least one node".into()));
    }
    if !(tol > 0.0) {
        return Err(PickError::InvalidData(format!("tolerance must be positive, got {tol}")));
    }
    let lower = data.max_target();
    if lower == 0.0 {
        return Ok(0.0);
    }
    if feasible(data, lower)? {
        return Ok(lower);
    }
    let mut lo = lower;
    let mut hi = 2.0 * lower;
    let mut doublings = 0;
    while !feasible(data, hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(PickError::InvalidData("no feasible scale found".into()));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(data, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
