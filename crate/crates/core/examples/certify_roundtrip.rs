// Serialize a solution, read it back, and re-certify it on a finer grid.

use pickpeak::cli::{cmd_certify, cmd_combined, ProblemDocument, EXIT_OK};
use pickpeak::funcalg::Expr;

const PROBLEM: &str = r#"{
  "boundary_set": [{"angle_turns": 0}],
  "boundary_values": [{"re": 1, "im": 0}],
  "interior_nodes": [{"re": 0, "im": 0}],
  "interior_targets": [{"re": 0.3, "im": 0}],
  "epsilon": 0.1
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let doc = ProblemDocument::from_json(PROBLEM)?;
    let solved = cmd_combined(&doc)?;
    assert_eq!(solved.exit_code, EXIT_OK);
    let solve_sup = solved.report.certificate.expect("certificate").boundary_sup;

    let json = solved.report.solution.expect("solution").to_json();
    let f = Expr::from_json(&json)?;
    println!("solution: {} bytes of JSON", json.len());

    let fine = ProblemDocument { grid: 1 << 16, ..doc };
    let recheck = cmd_certify(&fine, f)?;
    let fine_sup = recheck.report.certificate.expect("certificate").boundary_sup;
    println!("sup at solve time {solve_sup:.9}, at 2^16 points {fine_sup:.9}");
    assert_eq!(recheck.exit_code, EXIT_OK);
    assert!((fine_sup - solve_sup).abs() <= 1e-6);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
