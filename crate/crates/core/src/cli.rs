//! Batch front end: JSON problem documents in, JSON reports (and optional CSV
//! plot data) out, with a fixed exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O or numerical failure |
//! | 2 | schema error in the input |
//! | 3 | infeasible interior data |
//! | 4 | search exhausted |
//! | 5 | certification failed or certify mismatch |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combine::{solve_combined_with, BudgetReport, CombineError, CombinedProblem, DiscContext, COMBINED_CERT_TOL};
use crate::funcalg::{boundary_grid, boundary_sup_at, ComplexRecord, Expr, FuncError, NormCertificate};
use crate::peak::{BoundaryData, FiniteBoundarySet, PeakError, CERT_GRID};
use crate::pick::{build_pick_matrix, is_psd, minimal_norm, solve_pick, PickData, PickError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;
pub const EXIT_CERTIFICATION: i32 = 5;

pub const DEFAULT_TOL: f64 = 1e-9;

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_grid() -> usize {
    CERT_GRID
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryPoint {
    pub angle_turns: f64,
}

/// Input document shared by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_set: Option<Vec<BoundaryPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_values: Option<Vec<ComplexRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_nodes: Option<Vec<ComplexRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_targets: Option<Vec<ComplexRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Schema(format!("field `tol`: must be positive and finite, got {}", self.tol)));
        }
        if self.grid == 0 {
            return Err(CliError::Schema("field `grid`: must be positive".into()));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(CliError::Schema(format!("field `epsilon`: must be positive and finite, got {eps}")));
            }
        }
        pair_lengths("boundary_set", self.boundary_set.as_ref().map(Vec::len), "boundary_values", self.boundary_values.as_ref().map(Vec::len))?;
        pair_lengths("interior_nodes", self.interior_nodes.as_ref().map(Vec::len), "interior_targets", self.interior_targets.as_ref().map(Vec::len))
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_set.is_some()
    }

    pub fn has_interior(&self) -> bool {
        self.interior_nodes.is_some()
    }

    pub fn interior(&self) -> Result<PickData, CliError> {
        let (Some(nodes), Some(targets)) = (&self.interior_nodes, &self.interior_targets) else {
            return Err(CliError::Schema("fields `interior_nodes` and `interior_targets` are required".into()));
        };
        let conv = |v: &[ComplexRecord]| v.iter().map(|&r| Complex64::from(r)).collect();
        PickData::new(conv(nodes), conv(targets)).map_err(|e| CliError::Schema(format!("interior data: {e}")))
    }

    pub fn boundary(&self) -> Result<BoundaryData, CliError> {
        let (Some(set), Some(values)) = (&self.boundary_set, &self.boundary_values) else {
            return Err(CliError::Schema("fields `boundary_set` and `boundary_values` are required".into()));
        };
        let set = FiniteBoundarySet::new(set.iter().map(|p| p.angle_turns).collect())
            .map_err(|e| CliError::Schema(format!("field `boundary_set`: {e}")))?;
        BoundaryData::new(set, values.iter().map(|&r| r.into()).collect())
            .map_err(|e| CliError::Schema(format!("field `boundary_values`: {e}")))
    }
}

fn pair_lengths(a: &str, la: Option<usize>, b: &str, lb: Option<usize>) -> Result<(), CliError> {
    match (la, lb) {
        (None, None) => Ok(()),
        (Some(x), Some(y)) if x == y => Ok(()),
        (Some(x), Some(y)) => Err(CliError::Schema(format!("fields `{a}` ({x} entries) and `{b}` ({y} entries) differ in length"))),
        (Some(_), None) => Err(CliError::Schema(format!("field `{a}` given without `{b}`"))),
        (None, Some(_)) => Err(CliError::Schema(format!("field `{b}` given without `{a}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub grid_size: usize,
    pub boundary_sup: f64,
    pub converged: bool,
}

impl From<&NormCertificate> for CertificateSummary {
    fn from(c: &NormCertificate) -> Self {
        CertificateSummary { grid_size: c.grid_size, boundary_sup: c.boundary_sup, converged: c.converged }
    }
}

/// Output document shared by every command. Optional fields are omitted when
/// they do not apply; every numeric field present is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    /// `ok` or the failure class.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pick_matrix: Option<Vec<Vec<ComplexRecord>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_residuals: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_residuals: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_report: Option<BudgetReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_seconds: f64,
}

impl ReportDocument {
    fn new(command: Command) -> Self {
        ReportDocument {
            command: command.name().to_string(),
            status: "ok".into(),
            verdict: None,
            min_eigenvalue: None,
            pick_matrix: None,
            minimal_norm: None,
            solution: None,
            certificate: None,
            boundary_residuals: None,
            interior_residuals: None,
            budget_report: None,
            error: None,
            timing_seconds: 0.0,
        }
    }

    fn fail(&mut self, status: &str, message: String) {
        self.status = status.into();
        self.error = Some(message);
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report fields are finite");
        s.push('\n');
        s
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Pick matrix verdict and smallest eigenvalue.
    PickCheck,
    /// Interpolant of norm at most one by Schur reduction.
    PickSolve,
    /// Smallest achievable sup norm.
    PickMinnorm,
    /// Interior and boundary interpolation with norm at most 1 + epsilon.
    Combined,
    /// Re-certify a stored expression against a problem document.
    Certify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PickCheck => "pick-check",
            Command::PickSolve => "pick-solve",
            Command::PickMinnorm => "pick-minnorm",
            Command::Combined => "combined",
            Command::Certify => "certify",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Options {
    /// Problem document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report destination; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// CSV of |F| on the grid (`combined` only).
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Boundary grid size, overriding the document.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Tolerance, overriding the document.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Expression document to re-certify (`certify` only).
    #[arg(long, global = true)]
    pub expr: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "pickpeak", version, about = "Pick and peak interpolation in the disc algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// Report plus process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: ReportDocument,
    pub exit_code: i32,
    /// CSV text for `--plot`, when a solution was produced.
    pub plot: Option<String>,
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Applies flag overrides to a parsed document.
fn with_overrides(mut doc: ProblemDocument, options: &Options) -> Result<ProblemDocument, CliError> {
    if let Some(tol) = options.tol {
        doc.tol = tol;
    }
    if let Some(grid) = options.grid {
        doc.grid = grid;
    }
    doc.validate()?;
    Ok(doc)
}

fn record_matrix(rows: Vec<Vec<Complex64>>) -> Vec<Vec<ComplexRecord>> {
    rows.into_iter().map(|r| r.into_iter().map(ComplexRecord::from).collect()).collect()
}

pub fn cmd_pick_check(doc: &ProblemDocument) -> Result<Outcome, CliError> {
    let data = doc.interior()?;
    let mut report = ReportDocument::new(Command::PickCheck);
    let matrix = build_pick_matrix(&data);
    report.pick_matrix = Some(record_matrix(matrix.rows()));
    match is_psd(&matrix, doc.tol) {
        Ok(check) => {
            report.verdict = Some(check.verdict.as_str().into());
            report.min_eigenvalue = Some(check.min_eigenvalue);
            Ok(Outcome { report, exit_code: EXIT_OK, plot: None })
        }
        Err(e) => {
            report.fail("numerical-failure", e.to_string());
            Ok(Outcome { report, exit_code: EXIT_FAILURE, plot: None })
        }
    }
}

fn pick_exit(e: &PickError) -> (i32, &'static str) {
    match e {
        PickError::InvalidData(_) => (EXIT_SCHEMA, "schema-error"),
        PickError::Unsolvable { .. } => (EXIT_INFEASIBLE, "infeasible"),
        PickError::ResidualCheck { .. } => (EXIT_CERTIFICATION, "certification-failed"),
        PickError::Eigensolver | PickError::Func(_) => (EXIT_FAILURE, "numerical-failure"),
    }
}

pub fn cmd_pick_solve(doc: &ProblemDocument) -> Result<Outcome, CliError> {
    let data = doc.interior()?;
    let mut report = ReportDocument::new(Command::PickSolve);
    if let Ok(check) = is_psd(&build_pick_matrix(&data), doc.tol) {
        report.verdict = Some(check.verdict.as_str().into());
        report.min_eigenvalue = Some(check.min_eigenvalue);
    }
    let exit_code = match solve_pick(&data, doc.tol) {
        Ok(result) => {
            report.certificate = Some((&result.norm_certificate).into());
            report.interior_residuals = Some(result.residuals.clone());
            report.solution = Some(result.solution);
            EXIT_OK
        }
        Err(e) => {
            let (code, status) = pick_exit(&e);
            report.fail(status, e.to_string());
            code
        }
    };
    Ok(Outcome { report, exit_code, plot: None })
}

pub fn cmd_pick_minnorm(doc: &ProblemDocument) -> Result<Outcome, CliError> {
    let data = doc.interior()?;
    let mut report = ReportDocument::new(Command::PickMinnorm);
    let exit_code = match minimal_norm(&data, doc.tol) {
        Ok(t) => {
            report.minimal_norm = Some(t);
            EXIT_OK
        }
        Err(e) => {
            let (code, status) = pick_exit(&e);
            report.fail(status, e.to_string());
            code
        }
    };
    Ok(Outcome { report, exit_code, plot: None })
}

/// CSV rows `theta_turns,abs_F,re_F,im_F` on the `grid`-point boundary grid.
pub fn plot_csv(f: &Expr, grid: usize) -> Result<String, FuncError> {
    let mut out = String::from("theta_turns,abs_F,re_F,im_F\n");
    for (k, z) in boundary_grid(grid).into_iter().enumerate() {
        let v = f.eval(z)?;
        let theta = k as f64 / grid as f64;
        // `+ 0.0` prints negative zero as 0
        writeln!(out, "{theta},{},{},{}", v.norm(), v.re + 0.0, v.im + 0.0).expect("writing to a String");
    }
    Ok(out)
}

fn combine_exit(e: &CombineError) -> (i32, &'static str) {
    match e {
        CombineError::InfeasiblePick { .. } => (EXIT_INFEASIBLE, "infeasible"),
        CombineError::RootSearchExhausted { .. } | CombineError::Peak(PeakError::PowerCapExhausted { .. }) => {
            (EXIT_EXHAUSTED, "search-exhausted")
        }
        CombineError::CertificationFailed { .. } => (EXIT_CERTIFICATION, "certification-failed"),
        CombineError::InvalidProblem(_) | CombineError::Peak(PeakError::InvalidData(_) | PeakError::InvalidSet(_)) => {
            (EXIT_SCHEMA, "schema-error")
        }
        CombineError::Pick(p) => pick_exit(p),
        _ => (EXIT_FAILURE, "numerical-failure"),
    }
}

pub fn cmd_combined(doc: &ProblemDocument) -> Result<Outcome, CliError> {
    let boundary = doc.boundary()?;
    let interior = doc.interior()?;
    let epsilon = doc.epsilon.ok_or_else(|| CliError::Schema("field `epsilon` is required for `combined`".into()))?;
    let problem = CombinedProblem::new(boundary, interior, epsilon).map_err(|e| CliError::Schema(e.to_string()))?;
    let ctx = DiscContext { grid: doc.grid, cert_tol: COMBINED_CERT_TOL };
    let mut report = ReportDocument::new(Command::Combined);
    let solution = match solve_combined_with(&ctx, &problem, doc.tol) {
        Ok(sol) => Ok(sol),
        Err(CombineError::CertificationFailed { solution, bound }) => {
            let message = format!("certification failed: sup {} against bound {bound}", solution.certificate.boundary_sup);
            report.fail("certification-failed", message);
            Err(Some(solution))
        }
        Err(e) => {
            let (code, status) = combine_exit(&e);
            if let CombineError::InfeasiblePick { min_eigenvalue, matrix } = &e {
                report.verdict = Some("not-psd".into());
                report.min_eigenvalue = finite_or_none(*min_eigenvalue);
                report.pick_matrix = Some(record_matrix(matrix.clone()));
            }
            report.fail(status, e.to_string());
            return Ok(Outcome { report, exit_code: code, plot: None });
        }
    };
    let exit_code = if solution.is_ok() { EXIT_OK } else { EXIT_CERTIFICATION };
    let sol = match solution {
        Ok(sol) => sol,
        Err(Some(sol)) => *sol,
        Err(None) => unreachable!("failures without artifacts return early"),
    };
    if let Ok(check) = is_psd(&build_pick_matrix(&problem.interior), doc.tol) {
        report.verdict = Some(check.verdict.as_str().into());
        report.min_eigenvalue = Some(check.min_eigenvalue);
    }
    report.certificate = Some((&sol.certificate).into());
    report.boundary_residuals = Some(sol.boundary_residuals.clone());
    report.interior_residuals = Some(sol.interior_residuals.clone());
    report.budget_report = Some(sol.budget.clone());
    let plot = match plot_csv(&sol.f, doc.grid) {
        Ok(csv) => Some(csv),
        Err(e) => {
            report.fail("numerical-failure", e.to_string());
            return Ok(Outcome { report, exit_code: EXIT_FAILURE, plot: None });
        }
    };
    report.solution = Some(sol.f);
    Ok(Outcome { report, exit_code, plot })
}

/// Residuals of `f` against whatever data blocks `doc` carries, and its sup on
/// the document's grid. A refinement to twice the grid decides `converged`.
pub fn cmd_certify(doc: &ProblemDocument, f: Expr) -> Result<Outcome, CliError> {
    let mut report = ReportDocument::new(Command::Certify);
    let residuals = |pairs: Vec<(Complex64, Complex64)>| -> Result<Vec<f64>, FuncError> {
        pairs.into_iter().map(|(z, v)| f.eval(z).map(|fz| (fz - v).norm())).collect()
    };
    let result = (|| -> Result<(), FuncError> {
        if doc.has_boundary() {
            report.boundary_residuals = Some(residuals(doc.boundary().map_err(|e| FuncError::Parse(e.to_string()))?.samples())?);
        }
        if doc.has_interior() {
            let data = doc.interior().map_err(|e| FuncError::Parse(e.to_string()))?;
            let pairs = data.nodes().iter().copied().zip(data.targets().iter().copied()).collect();
            report.interior_residuals = Some(residuals(pairs)?);
        }
        let sup = boundary_sup_at(&f, doc.grid)?;
        let refined = boundary_sup_at(&f, 2 * doc.grid)?;
        report.certificate = Some(CertificateSummary {
            grid_size: doc.grid,
            boundary_sup: sup,
            converged: refined - sup < COMBINED_CERT_TOL,
        });
        Ok(())
    })();
    if let Err(e) = result {
        report.fail("numerical-failure", e.to_string());
        return Ok(Outcome { report, exit_code: EXIT_FAILURE, plot: None });
    }
    let worst = report
        .boundary_residuals
        .iter()
        .chain(&report.interior_residuals)
        .flatten()
        .copied()
        .fold(0.0, f64::max);
    report.solution = Some(f);
    let exit_code = if worst > doc.tol {
        report.verdict = Some("mismatch".into());
        report.fail("certification-failed", format!("residual {worst:e} exceeds tol {:e}", doc.tol));
        EXIT_CERTIFICATION
    } else {
        report.verdict = Some("match".into());
        EXIT_OK
    };
    Ok(Outcome { report, exit_code, plot: None })
}

/// Runs `command` on an in-memory document; `expr` is required for `certify`.
pub fn execute(command: Command, doc: &ProblemDocument, expr: Option<&str>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut outcome = match command {
        Command::PickCheck => cmd_pick_check(doc),
        Command::PickSolve => cmd_pick_solve(doc),
        Command::PickMinnorm => cmd_pick_minnorm(doc),
        Command::Combined => cmd_combined(doc),
        Command::Certify => {
            let text = expr.ok_or_else(|| CliError::Schema("`certify` needs an expression (--expr)".into()))?;
            let f = Expr::from_json(text).map_err(|e| CliError::Schema(format!("expression: {e}")))?;
            cmd_certify(doc, f)
        }
    }?;
    outcome.report.timing_seconds = start.elapsed().as_secs_f64();
    Ok(outcome)
}

fn schema_report(command: Command, err: &CliError) -> ReportDocument {
    let mut report = ReportDocument::new(command);
    let status = if err.exit_code() == EXIT_SCHEMA { "schema-error" } else { "io-error" };
    report.fail(status, err.to_string());
    report
}

/// Reads files, runs the command and writes the report and plot. Returns the
/// exit code.
pub fn run(cli: &Cli) -> i32 {
    let options = &cli.options;
    let outcome = (|| -> Result<Outcome, CliError> {
        let input = options.input.as_deref().ok_or_else(|| CliError::Schema("--input is required".into()))?;
        let doc = with_overrides(ProblemDocument::from_json(&read(input)?)?, options)?;
        let expr = options.expr.as_deref().map(read).transpose()?;
        execute(cli.command, &doc, expr.as_deref())
    })();
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => Outcome { report: schema_report(cli.command, &e), exit_code: e.exit_code(), plot: None },
    };
    let mut exit_code = outcome.exit_code;
    if let (Some(path), Some(csv)) = (&options.plot, &outcome.plot) {
        if let Err(e) = write(path, csv) {
            eprintln!("{e}");
            exit_code = EXIT_FAILURE;
        }
    }
    let json = outcome.report.to_json();
    match &options.output {
        Some(path) => {
            if let Err(e) = write(path, &json) {
                eprintln!("{e}");
                exit_code = EXIT_FAILURE;
            }
        }
        None => print!("{json}"),
    }
    if let Some(message) = &outcome.report.error {
        eprintln!("{}: {message}", cli.command.name());
    }
    exit_code
}
