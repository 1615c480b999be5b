// Interpolate on a boundary set and at interior points at once, with norm at most 1 + epsilon.

use pickpeak::combine::{solve_combined, CombinedProblem};
use pickpeak::funcalg::boundary_sup_at;
use pickpeak::peak::{BoundaryData, FiniteBoundarySet};
use pickpeak::pick::PickData;
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let boundary = BoundaryData::new(
        FiniteBoundarySet::new(vec![0.0, 0.25, 0.5])?,
        vec![c(0.9, 0.0), c(-0.9, 0.0), c(0.0, -0.9)],
    )?;
    let interior = PickData::new(vec![c(0.0, 0.0), c(0.3, 0.0)], vec![c(0.3, 0.0), c(0.2, 0.1)])?;
    let problem = CombinedProblem::new(boundary, interior, 0.05)?;
    let solution = solve_combined(&problem, 1e-9)?;

    println!("boundary residuals {:?}", solution.boundary_residuals);
    println!("interior residuals {:?}", solution.interior_residuals);
    println!("corrections sigma  {:?}", solution.sigma);
    println!("budget             {:?}", solution.budget);
    println!(
        "sup |F| = {:.9} on {} points (converged {})",
        solution.certificate.boundary_sup, solution.certificate.grid_size, solution.certificate.converged
    );
    assert!(boundary_sup_at(&solution.f, 1 << 14)? <= 1.05 + 1e-6);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
