// Synthesize an interpolant of norm at most one by Schur reduction.

use pickpeak::pick::{solve_pick, PickData};
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let nodes = vec![Complex64::new(0.1, 0.2), Complex64::new(-0.5, 0.3), Complex64::new(0.0, -0.7)];
    let targets = vec![Complex64::new(0.3, -0.1), Complex64::new(0.2, 0.2), Complex64::new(-0.4, 0.1)];
    let data = PickData::new(nodes.clone(), targets.clone())?;
    let result = solve_pick(&data, 1e-9)?;
    for ((z, w), r) in nodes.iter().zip(&targets).zip(&result.residuals) {
        println!("f({z}) = {}  (target {w}, residual {r:.1e})", result.solution.eval(*z)?);
    }
    println!(
        "boundary sup {:.9} on a {}-point grid, {} expression nodes",
        result.norm_certificate.boundary_sup,
        result.norm_certificate.grid_size,
        result.solution.size()
    );
    assert!(result.max_residual() <= 1e-9);
    assert!(result.norm_certificate.boundary_sup <= 1.0 + 1e-7);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
