// Interpolate values on a finite boundary set with norm at most 1 + slack.

use pickpeak::funcalg::{boundary_sup, Expr};
use pickpeak::peak::{lagrange_boundary, peak_interpolate, BoundaryData, FiniteBoundarySet, CERT_GRID};
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = FiniteBoundarySet::new(vec![0.0, 0.25, 0.5])?;
    let values = vec![Complex64::new(0.9, 0.0), Complex64::new(-0.9, 0.0), Complex64::new(0.0, -0.9)];
    let data = BoundaryData::new(set, values)?;

    // The bare polynomial interpolant overshoots; damping by a peak power fixes that.
    let p = lagrange_boundary(&data)?;
    println!("Lagrange interpolant sup: {:.4}", boundary_sup(&p, 1e-6)?.boundary_sup);
    let h = peak_interpolate(&data, 0.01, &Expr::zero(), 0.01, CERT_GRID)?;
    let sup = boundary_sup(&h.expr, 1e-6)?;
    println!("peak interpolant p r^{}: sup {:.6} (converged {})", h.power, sup.boundary_sup, sup.converged);
    for (z, v) in data.samples() {
        assert!((h.expr.eval(z)? - v).norm() <= 1e-12);
    }
    assert!(sup.boundary_sup <= 1.0 + 0.01 + 1e-6);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
