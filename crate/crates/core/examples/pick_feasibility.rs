// Decide solvability of interior interpolation data from the Pick matrix.

use pickpeak::pick::{build_pick_matrix, is_psd, PickData, PsdVerdict};
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let z = vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
    for (label, w2, expected) in [
        ("forced identity", 0.5, PsdVerdict::Psd),
        ("too fast", 0.9, PsdVerdict::NotPsd),
        ("comfortable", 0.2, PsdVerdict::Psd),
    ] {
        let data = PickData::new(z.clone(), vec![Complex64::new(0.0, 0.0), Complex64::new(w2, 0.0)])?;
        let check = is_psd(&build_pick_matrix(&data), 1e-9)?;
        println!("{label:>16}: w = (0, {w2}) -> {} (lambda_min {:+.6})", check.verdict.as_str(), check.min_eigenvalue);
        assert_eq!(check.verdict, expected);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
