// Drive the generic combination steps directly through the algebra-context interface.

use pickpeak::combine::{separating_family, step1, step2, AlgebraContext, DiscContext};
use pickpeak::peak::{BoundaryData, FiniteBoundarySet};
use pickpeak::pick::{solve_pick, PickData};
use pickpeak::Complex64;

/// Evaluates `f` at `x` and at every sample of the boundary data.
fn report<C: AlgebraContext>(ctx: &C, name: &str, f: &C::Function, boundary: &C::Boundary, x: C::Point)
-> Result<(), Box<dyn std::error::Error>> {
    let at_x = ctx.evaluate(f, x)?;
    let worst = ctx
        .boundary_samples(boundary)
        .into_iter()
        .map(|(p, v)| ctx.evaluate(f, p).map(|fp| (fp - v).norm()))
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))?;
    let sup = ctx.norm_estimate(f)?.boundary_sup;
    println!("{name}: value {at_x:.6} at {x:?}, boundary miss {worst:.1e}, sup {sup:.6}");
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = DiscContext::default();
    let boundary = BoundaryData::new(FiniteBoundarySet::new(vec![0.0])?, vec![Complex64::new(1.0, 0.0)])?;
    let alphas = [Complex64::new(0.0, 0.0)];
    let targets = [Complex64::new(0.3, 0.0)];

    let l = solve_pick(&PickData::new(alphas.to_vec(), targets.to_vec())?, 1e-9)?.solution;
    let eps = 0.1;
    let family = separating_family(&ctx, &boundary, &alphas)?;
    let internal = eps / (1.0 + alphas.len() as f64 * family.bound);
    println!("separator bound M = {:.6}, internal epsilon {internal:.6}", family.bound);

    let first = step1(&ctx, &boundary, &alphas, &targets, &l, internal)?;
    println!("root order m = {}, analytic bound {:.6}", first.root_order, first.norm_bound);
    report(&ctx, "G", &first.expr, &boundary, alphas[0])?;

    let (f, sigma) = step2(&ctx, &first.expr, &family, &alphas, &targets)?;
    println!("sigma = {sigma:?}");
    report(&ctx, "F", &f, &boundary, alphas[0])?;
    assert!((ctx.evaluate(&f, alphas[0])? - targets[0]).norm() <= 1e-12);
    assert!(ctx.norm_estimate(&f)?.boundary_sup <= 1.0 + eps + 1e-6);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
