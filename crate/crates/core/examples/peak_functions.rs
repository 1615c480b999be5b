// Peak functions of finite boundary sets and the root sequence built from them.

use pickpeak::funcalg::{boundary_sup_at, turns_to_point};
use pickpeak::peak::{peak_function, root_sequence, FiniteBoundarySet};
use pickpeak::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = FiniteBoundarySet::new(vec![0.0, 0.25, 0.5])?;
    let r = peak_function(&set);
    for z in set.points() {
        assert_eq!(r.eval(z)?, Complex64::new(1.0, 0.0));
    }
    for t in [0.1, 0.375, 0.75] {
        let z = turns_to_point(t);
        println!("|r| at {t} turns: {:.6}", r.eval(z)?.norm());
    }
    println!("|r(0)| = {:.6}", r.eval(Complex64::new(0.0, 0.0))?.norm());

    // f_m = ((1 - r) / 2)^(1/m) vanishes on the set and climbs to 1 elsewhere.
    let probe = Complex64::new(0.3, -0.4);
    let mut previous = 0.0;
    for m in [1, 4, 16, 64, 256] {
        let f = root_sequence(&r, m)?;
        let v = f.eval(probe)?.norm();
        println!("m = {m:>3}: |f_m(probe)| = {v:.6}, f_m(i) = {}", f.eval(turns_to_point(0.25))?);
        assert!(v >= previous && boundary_sup_at(&f, 4096)? <= 1.0);
        previous = v;
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
