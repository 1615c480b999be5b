use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{AlgebraContext, CombineError};

/// Largest root order tried in the first step.
pub const ROOT_CAP: u32 = 1 << 20;
/// `|(1 - r(a_j)) k_j(a_j)|` below this makes a separator degenerate.
pub const SEPARATOR_FLOOR: f64 = 1e-12;
/// The hypothesis function must match the interior targets this closely.
pub const HYPOTHESIS_RESIDUAL: f64 = 1e-8;

/// Output of [`step1`].
#[derive(Debug, Clone)]
pub struct Step1Output<F> {
    /// `G`, equal to the boundary data on the set and within `eps / 2` of the
    /// interior targets, with norm at most `1 + eps`.
    pub expr: F,
    /// `g = f_m * l`.
    pub g: F,
    /// The boundary interpolant `h`.
    pub h: F,
    /// Root order `m` of the sequence element `f_m`.
    pub root_order: u32,
    /// Norm estimates of `l` and `h` used in the bound.
    pub l_norm: f64,
    pub h_norm: f64,
    /// Analytic bound on `|G|` from `|f_m| + |1 - f_m| <= 1 + pi / (2m)`.
    pub norm_bound: f64,
}

fn norm_bound(l_norm: f64, h_norm: f64, m: u32) -> f64 {
    if l_norm == 0.0 {
        h_norm
    } else if h_norm == 0.0 {
        l_norm
    } else {
        l_norm.max(h_norm) * (1.0 + FRAC_PI_2 / f64::from(m))
    }
}

/// First step: a function equal to the boundary data on the set, close to the
/// interior targets, with norm at most `1 + eps`.
///
/// With `f_m` the root sequence of the peak function (zero on the set, tending
/// to 1 off it) and `h` a boundary interpolant of norm at most `1 + eps / 2`,
/// the result is `G = f_m l + (1 - f_m) h`. Since `f_m` takes values in the
/// image of `|z - 1/2| <= 1/2` under the principal `m`-th root,
/// `|f_m| + |1 - f_m| <= 1 + pi / (2m)`, which bounds `|G|` pointwise by
/// `max(||l||, ||h||) (1 + pi / (2m))`. The order `m` doubles until that bound is
/// at most `1 + eps`, `|g(a_j) - w_j| < eps / 2` and `|G(a_j) - w_j| < eps / 2`.
/// When `l` vanishes identically, `G = h`.
pub fn step1<C: AlgebraContext>(
    ctx: &C,
    boundary: &C::Boundary,
    alphas: &[C::Point],
    targets: &[Complex64],
    l: &C::Function,
    eps: f64,
) -> Result<Step1Output<C::Function>, CombineError> {
    if alphas.len() != targets.len() {
        return Err(CombineError::InvalidProblem("node and target counts differ".into()));
    }
    if !(eps > 0.0) {
        return Err(CombineError::InvalidProblem(format!("epsilon must be positive, got {eps}")));
    }
    let l_at: Vec<Complex64> = alphas.iter().map(|&a| ctx.evaluate(l, a)).collect::<Result<_, _>>()?;
    if let Some((j, miss)) =
        l_at.iter().zip(targets).map(|(v, w)| (v - w).norm()).enumerate().find(|&(_, miss)| !(miss <= HYPOTHESIS_RESIDUAL))
    {
        return Err(CombineError::Precondition(format!("misses target {j} by {miss:e}")));
    }
    let l_norm = ctx.norm_estimate(l)?.boundary_sup;
    if l_norm > 1.0 + eps / 2.0 {
        return Err(CombineError::Precondition(format!("norm {l_norm} exceeds 1 + eps/2")));
    }

    let peak = ctx.peak_provider(boundary);
    let no_region = ctx.constant(Complex64::new(0.0, 0.0))?;
    let h = ctx.interpolation_primitive(boundary, eps / 2.0, &no_region, eps / 2.0)?;
    let h_norm = ctx.norm_estimate(&h)?.boundary_sup;

    if ctx.is_zero(l) {
        let g = ctx.constant(Complex64::new(0.0, 0.0))?;
        return Ok(Step1Output { expr: h.clone(), g, h, root_order: 1, l_norm, h_norm, norm_bound: h_norm });
    }

    let h_at: Vec<Complex64> = alphas.iter().map(|&a| ctx.evaluate(&h, a)).collect::<Result<_, _>>()?;
    let one = Complex64::new(1.0, 0.0);
    let mut m = 1u32;
    let mut worst = f64::INFINITY;
    while m <= ROOT_CAP {
        let root = ctx.root_sequence(&peak, m)?;
        let mut miss = 0.0f64;
        for (j, &a) in alphas.iter().enumerate() {
            let u = ctx.evaluate(&root, a)?;
            let g_miss = (u * l_at[j] - targets[j]).norm();
            let blend_miss = (u * l_at[j] + (one - u) * h_at[j] - targets[j]).norm();
            miss = miss.max(g_miss).max(blend_miss);
        }
        let bound = norm_bound(l_norm, h_norm, m);
        if miss < eps / 2.0 && bound <= 1.0 + eps {
            let g = ctx.mul(&root, l);
            let complement = ctx.sub(&ctx.constant(one)?, &root);
            let expr = ctx.add(&g, &ctx.mul(&complement, &h));
            return Ok(Step1Output { expr, g, h, root_order: m, l_norm, h_norm, norm_bound: bound });
        }
        worst = miss;
        m *= 2;
    }
    Err(CombineError::RootSearchExhausted { cap: ROOT_CAP, target: eps / 2.0, worst })
}

/// Functions `phi_j` equal to 1 at `a_j`, vanishing at the other nodes and on
/// the boundary set, with `bound = max_j ||phi_j||`.
#[derive(Debug, Clone)]
pub struct SeparatingFamily<F> {
    pub members: Vec<F>,
    pub norms: Vec<f64>,
    pub bound: f64,
}

/// `phi_j = (1 - r) k_j / ((1 - r(a_j)) k_j(a_j))` with `r` the peak function
/// and `k_j` the context's separator for node `j`.
pub fn separating_family<C: AlgebraContext>(
    ctx: &C,
    boundary: &C::Boundary,
    alphas: &[C::Point],
) -> Result<SeparatingFamily<C::Function>, CombineError> {
    let peak = ctx.peak_provider(boundary);
    let one_minus_peak = ctx.sub(&ctx.constant(Complex64::new(1.0, 0.0))?, &peak);
    let mut members = Vec::with_capacity(alphas.len());
    let mut norms = Vec::with_capacity(alphas.len());
    for (j, &a) in alphas.iter().enumerate() {
        let base = ctx.mul(&one_minus_peak, &ctx.separator(j, alphas)?);
        let at_node = ctx.evaluate(&base, a)?;
        if at_node.norm() < SEPARATOR_FLOOR {
            return Err(CombineError::DegenerateSeparator { index: j, modulus: at_node.norm() });
        }
        let phi = ctx.scale(&base, Complex64::new(1.0, 0.0) / at_node)?;
        norms.push(ctx.norm_estimate(&phi)?.boundary_sup);
        members.push(phi);
    }
    let bound = norms.iter().copied().fold(0.0, f64::max);
    Ok(SeparatingFamily { members, norms, bound })
}

/// Second step: `F = G - sum_j sigma_j phi_j` with `sigma_j = G(a_j) - w_j`.
pub fn step2<C: AlgebraContext>(
    ctx: &C,
    g: &C::Function,
    family: &SeparatingFamily<C::Function>,
    alphas: &[C::Point],
    targets: &[Complex64],
) -> Result<(C::Function, Vec<Complex64>), CombineError> {
    if family.members.len() != alphas.len() || alphas.len() != targets.len() {
        return Err(CombineError::InvalidProblem("family, nodes and targets must have equal length".into()));
    }
    let mut f = g.clone();
    let mut sigma = Vec::with_capacity(alphas.len());
    for ((&a, &w), phi) in alphas.iter().zip(targets).zip(&family.members) {
        let s = ctx.evaluate(g, a)? - w;
        if s != Complex64::new(0.0, 0.0) {
            f = ctx.sub(&f, &ctx.scale(phi, s)?);
        }
        sigma.push(s);
    }
    Ok((f, sigma))
}
