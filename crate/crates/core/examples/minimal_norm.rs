// Smallest achievable sup norm, cross-checked by direct search over Blaschke products.

use pickpeak::pick::{brute_force_oracle, minimal_norm, PickData};
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // f(0) = 0 and f(1/2) = 0.9 force ||f|| >= 0.9 / 0.5 by the Schwarz lemma.
    let data = PickData::new(
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.9, 0.0)],
    )?;
    let t = minimal_norm(&data, 1e-9)?;
    let oracle = brute_force_oracle(&data, 2, 8)?;
    println!("bisection: {t:.9}");
    println!("oracle:    {:.6} (degree {}, residual {:.1e})", oracle.norm, oracle.degree, oracle.max_residual);
    assert!((t - 1.8).abs() <= 1e-6);
    assert!((oracle.norm - t).abs() <= 1e-3);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
