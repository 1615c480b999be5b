//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pickpeak::combine::{solve_combined, CombinedProblem};
use pickpeak::funcalg::{boundary_grid, boundary_sup_at, interior_grid, interior_sup, turns_to_point, Expr};
use pickpeak::peak::{peak_function, root_sequence, BoundaryData, FiniteBoundarySet};
use pickpeak::pick::{
    brute_force_oracle, build_pick_matrix, is_psd, minimal_norm, solve_pick, PickData, PickError, PsdVerdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Outcome of one criterion: pass flag and a one-line summary.
type Verdict = (bool, String);

fn random_disc_point(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    Complex64::from_polar(max_radius * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

fn blaschke_value(zeros: &[Complex64], phase: f64, z: Complex64) -> Complex64 {
    zeros.iter().fold(Complex64::from_polar(1.0, phase), |acc, &a| acc * (z - a) / (c(1.0, 0.0) - a.conj() * z))
}

fn separated_nodes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let nodes: Vec<Complex64> = (0..n).map(|_| random_disc_point(rng, 0.9)).collect();
        let ok = nodes.iter().enumerate().all(|(i, a)| nodes[i + 1..].iter().all(|b| (a - b).norm() > 0.05));
        if ok {
            return nodes;
        }
    }
}

fn random_set(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteBoundarySet {
    loop {
        let n = rng.random_range(1..=max_points);
        let angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        if let Ok(set) = FiniteBoundarySet::new(angles) {
            return set;
        }
    }
}

/// Criterion 1: solver success agrees with the PSD verdict on non-marginal instances.
fn pick_equivalence(built: &mut Vec<Expr>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let (mut checked, mut marginal, mut mismatches) = (0, 0, Vec::new());
    for instance in 0..200 {
        let n = rng.random_range(1..=4);
        let nodes = separated_nodes(&mut rng, n);
        let degree = rng.random_range(0..=4);
        let zeros: Vec<Complex64> = (0..degree).map(|_| random_disc_point(&mut rng, 0.95)).collect();
        let phase = TAU * rng.random::<f64>();
        let mut targets: Vec<Complex64> = nodes.iter().map(|&z| blaschke_value(&zeros, phase, z)).collect();
        if instance % 2 == 1 {
            for w in &mut targets {
                *w += random_disc_point(&mut rng, 0.4);
                if w.norm() > 0.99 {
                    *w *= 0.99 / w.norm();
                }
            }
        }
        let data = PickData::new(nodes, targets).expect("valid instance");
        let check = is_psd(&build_pick_matrix(&data), 1e-9).expect("eigensolver");
        if check.min_eigenvalue.abs() <= 1e-6 * check.scale {
            marginal += 1;
            continue;
        }
        checked += 1;
        let solved = solve_pick(&data, 1e-9);
        let agrees = matches!(
            (&solved, check.verdict),
            (Ok(_), PsdVerdict::Psd) | (Err(PickError::Unsolvable { .. }), PsdVerdict::NotPsd)
        );
        if !agrees {
            mismatches.push(format!("#{instance}: {:?} vs {:?}", check.verdict, solved.as_ref().err()));
        }
        if let Ok(result) = solved {
            built.push(result.solution);
        }
    }
    let elapsed = start.elapsed();
    (
        mismatches.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "{checked} non-marginal instances ({marginal} marginal skipped), {} mismatches {:?}, {:.2}s",
            mismatches.len(),
            mismatches,
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 2: the two-point closed form and the independent oracle.
fn minimal_norm_closed_form() -> Verdict {
    let data = PickData::new(vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.0, 0.0), c(0.9, 0.0)]).unwrap();
    let t = minimal_norm(&data, 1e-9).expect("minimal norm");
    let oracle = brute_force_oracle(&data, 2, 16).expect("oracle");
    let ok = (t - 1.8).abs() <= 1e-6 && (oracle.norm - t).abs() <= 1e-3 && !oracle.budget_exhausted;
    (ok, format!("minimal_norm {t:.9}, oracle {:.6} (degree {})", oracle.norm, oracle.degree))
}

/// Criterion 3: peak functions stay below 1 off the set, on the circle and inside.
fn peak_functions(built: &mut Vec<Expr>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    let (mut worst_boundary, mut worst_interior, mut on_set) = (0.0f64, 0.0f64, true);
    for _ in 0..20 {
        let set = random_set(&mut rng, 8);
        let r = peak_function(&set);
        let mut probes: Vec<Complex64> = boundary_grid(1 << 14);
        for &angle in set.angles() {
            for d in [1.1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
                probes.push(turns_to_point(angle + d / TAU));
                probes.push(turns_to_point(angle - d / TAU));
            }
        }
        for z in probes.into_iter().filter(|&z| set.distance(z) > 1e-6) {
            worst_boundary = worst_boundary.max(r.eval(z).unwrap().norm());
        }
        for z in interior_grid(64, 64) {
            worst_interior = worst_interior.max(r.eval(z).unwrap().norm());
        }
        on_set &= set.points().iter().all(|&z| r.eval(z).unwrap() == c(1.0, 0.0));
        built.push(r.expr);
    }
    let elapsed = start.elapsed();
    (
        worst_boundary < 1.0 && worst_interior < 1.0 && on_set && elapsed < Duration::from_secs(5),
        format!(
            "max |r| off set {worst_boundary:.15}, interior {worst_interior:.6}, r = 1 on sets: {on_set}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 4: the root sequence grows monotonically toward 1 off the set.
fn root_sequence_behaviour(built: &mut Vec<Expr>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let set = random_set(&mut rng, 5);
    let r = peak_function(&set);
    let orders: Vec<u32> = (0..=14).map(|k| 1u32 << k).collect();
    let roots: Vec<Expr> = orders.iter().map(|&m| root_sequence(&r, m).unwrap()).collect();
    let mut points = Vec::new();
    while points.len() < 100 {
        let z = if points.len() % 4 == 0 {
            turns_to_point(rng.random::<f64>())
        } else {
            random_disc_point(&mut rng, 1.0)
        };
        if set.distance(z) > 1e-9 {
            points.push(z);
        }
    }
    let (mut monotone, mut bounded, mut near_one) = (true, true, true);
    let mut worst_gap = 0.0f64;
    for &z in &points {
        let moduli: Vec<f64> = roots.iter().map(|f| f.eval(z).unwrap().norm()).collect();
        monotone &= moduli.windows(2).all(|w| w[1] >= w[0]);
        bounded &= moduli.iter().all(|&m| m <= 1.0);
        let g = ((c(1.0, 0.0) - r.eval(z).unwrap()) / 2.0).norm();
        if g > 1e-3 {
            let gap = 1.0 - moduli[moduli.len() - 1];
            worst_gap = worst_gap.max(gap);
            near_one &= gap <= 1e-2;
        }
    }
    let on_set = roots.iter().all(|f| set.points().iter().all(|&z| f.eval(z).unwrap().norm() <= 1e-12));
    built.extend(roots);
    (
        monotone && bounded && near_one && on_set,
        format!(
            "monotone {monotone}, bounded {bounded}, zero on set {on_set}, worst 1 - |f_2^14| {worst_gap:.2e} (|E| = {})",
            set.len()
        ),
    )
}

fn fixture_problem() -> CombinedProblem {
    let set = FiniteBoundarySet::new(vec![0.0, 0.25, 0.5]).unwrap();
    let values = vec![c(0.9, 0.0), c(-0.9, 0.0), c(0.0, -0.9)];
    let interior = PickData::new(vec![c(0.0, 0.0), c(0.3, 0.0)], vec![c(0.3, 0.0), c(0.2, 0.1)]).unwrap();
    CombinedProblem::new(BoundaryData::new(set, values).unwrap(), interior, 0.05).unwrap()
}

/// Criteria 5 and 6: the end-to-end fixture and its bound chain.
fn end_to_end(built: &mut Vec<Expr>) -> (Verdict, Verdict) {
    let problem = fixture_problem();
    let lambda = is_psd(&build_pick_matrix(&problem.interior), 1e-9).unwrap().min_eigenvalue;
    let start = Instant::now();
    let solution = match solve_combined(&problem, 1e-9) {
        Ok(s) => s,
        Err(e) => {
            let failed = (false, format!("solve_combined failed: {e}"));
            return (failed.clone(), failed);
        }
    };
    let elapsed = start.elapsed();
    let residual = solution.boundary_residuals.iter().chain(&solution.interior_residuals).copied().fold(0.0, f64::max);
    let sup = boundary_sup_at(&solution.f, 1 << 14).unwrap();
    let five = (
        lambda > 1e-3 && residual <= 1e-7 && sup <= 1.05 + 1e-6 && elapsed < Duration::from_secs(30),
        format!(
            "lambda_min {lambda:.4}, max residual {residual:.2e}, sup at 2^14 {sup:.9}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
    let b = &solution.budget;
    let bound = 1.0 + b.internal_epsilon * (1.0 + problem.interior.len() as f64 * b.separator_bound);
    let six = (
        solution.certificate.boundary_sup <= bound + 1e-6 && b.step1_sup <= 1.0 + b.internal_epsilon + 1e-6,
        format!(
            "sup {:.9} <= 1 + eps'(1 + n M) = {bound:.9} (eps' {:.3e}, M {:.4}); step-one sup {:.9} <= 1 + eps'",
            solution.certificate.boundary_sup, b.internal_epsilon, b.separator_bound, b.step1_sup
        ),
    );
    built.push(solution.pre_correction);
    built.push(solution.f);
    (five, six)
}

/// Criterion 7: maximum modulus on every expression built above.
fn max_modulus(built: &[Expr]) -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for f in built {
        let inner = interior_sup(f, 64, 64).unwrap();
        let outer = boundary_sup_at(f, 1 << 14).unwrap();
        worst = worst.max(inner - outer);
    }
    (worst <= 1e-9, format!("{} expressions, max(interior sup - boundary sup) {worst:.3e}", built.len()))
}

/// Criterion 8: the binary reports infeasibility with exit code 3.
fn infeasibility_exit_code() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("problem.json");
    let output = dir.path().join("report.json");
    std::fs::write(
        &input,
        r#"{"boundary_set":[{"angle_turns":0}],"boundary_values":[{"re":1,"im":0}],
            "interior_nodes":[{"re":0,"im":0},{"re":0.5,"im":0}],
            "interior_targets":[{"re":0,"im":0},{"re":0.9,"im":0}],"epsilon":0.1}"#,
    )
    .unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_pickpeak"))
        .args(["combined", "--input"])
        .arg(&input)
        .arg("--output")
        .arg(&output)
        .status()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    let lambda = report["min_eigenvalue"].as_f64().unwrap_or(f64::NAN);
    (status.code() == Some(3) && lambda < -1e-3, format!("exit code {:?}, reported lambda_min {lambda:.4}", status.code()))
}

fn main() {
    let mut built = Vec::new();
    let mut results = vec![
        ("1 Pick equivalence", pick_equivalence(&mut built)),
        ("2 minimal norm closed form", minimal_norm_closed_form()),
        ("3 peak function", peak_functions(&mut built)),
        ("4 root sequence", root_sequence_behaviour(&mut built)),
    ];
    let (five, six) = end_to_end(&mut built);
    results.push(("5 end-to-end fixture", five));
    results.push(("6 bound chain", six));
    results.push(("7 max modulus", max_modulus(&built)));
    results.push(("8 infeasibility exit code", infeasibility_exit_code()));

    let mut all = true;
    for (name, (ok, detail)) in &results {
        println!("{} criterion {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        all &= ok;
    }
    if !all {
        std::process::exit(1);
    }
}
