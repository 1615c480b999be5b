use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::norm::{boundary_grid, interior_grid, turns_to_point};
use super::{
    is_finite, FuncError, CHECK_GRID, DEGENERATE_DENOMINATOR, DOMAIN_SLACK, PEAK_SNAP,
    QUOTIENT_FLOOR, RANGE_SLACK,
};

/// One node of an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Constant(Complex64),
    Identity,
    Sum(Expr, Expr),
    Difference(Expr, Expr),
    Product(Expr, Expr),
    Quotient(Expr, Expr),
    /// `b_a(arg) = (arg - a) / (1 - conj(a) arg)`, `|a| < 1`.
    Mobius { a: Complex64, arg: Expr },
    /// Principal `m`-th root of an argument with values in `|z - 1/2| <= 1/2`.
    Root { m: u32, arg: Expr },
    /// Non-negative integer power.
    Power { m: u32, arg: Expr },
    /// `scale * arg + shift`.
    Affine { scale: Complex64, shift: Complex64, arg: Expr },
    /// `H / (1 + H)` with `H(z) = 1 + sum_k (zeta_k + z) / (zeta_k - z)`, equal to 1 on the set.
    Peak { angles: Vec<f64>, points: Vec<Complex64> },
}

/// Immutable, cheaply clonable handle to an expression tree.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn mobius_map(a: Complex64, v: Complex64) -> Result<Complex64, FuncError> {
    let den = Complex64::new(1.0, 0.0) - a.conj() * v;
    if den.norm() < DEGENERATE_DENOMINATOR {
        return Err(FuncError::DegenerateExpression { modulus: den.norm(), re: v.re, im: v.im });
    }
    Ok((v - a) / den)
}

fn principal_root_value(v: Complex64, m: u32) -> Complex64 {
    if v == Complex64::new(0.0, 0.0) {
        return v;
    }
    if m == 1 {
        return v;
    }
    let inv = 1.0 / f64::from(m);
    Complex64::from_polar(v.norm().powf(inv), v.arg() * inv)
}

fn delta_excess(v: Complex64) -> f64 {
    (v - Complex64::new(0.5, 0.0)).norm() - 0.5
}

pub(crate) fn peak_value(points: &[Complex64], z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if points.iter().any(|&p| (p - z).norm() <= PEAK_SNAP) {
        return one;
    }
    let h = points.iter().fold(one, |acc, &p| acc + (p + z) / (p - z));
    one - one / (one + h)
}

impl Expr {
    pub(crate) fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn identity() -> Self {
        Self::from_node(Node::Identity)
    }

    pub fn zero() -> Self {
        Self::from_node(Node::Constant(Complex64::new(0.0, 0.0)))
    }

    pub fn one() -> Self {
        Self::from_node(Node::Constant(Complex64::new(1.0, 0.0)))
    }

    pub fn constant(c: Complex64) -> Result<Self, FuncError> {
        if !is_finite(c) {
            return Err(FuncError::NonFinite);
        }
        Ok(Self::from_node(Node::Constant(c)))
    }

    pub fn real(x: f64) -> Result<Self, FuncError> {
        Self::constant(Complex64::new(x, 0.0))
    }

    /// The constant value, if this is a constant node.
    pub fn as_constant(&self) -> Option<Complex64> {
        match self.node() {
            Node::Constant(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_constant() == Some(Complex64::new(1.0, 0.0))
    }

    pub fn sum(&self, other: &Expr) -> Expr {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => Self::from_node(Node::Constant(a + b)),
            _ if other.is_zero() => self.clone(),
            _ if self.is_zero() => other.clone(),
            _ => Self::from_node(Node::Sum(self.clone(), other.clone())),
        }
    }

    pub fn difference(&self, other: &Expr) -> Expr {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => Self::from_node(Node::Constant(a - b)),
            _ if other.is_zero() => self.clone(),
            _ => Self::from_node(Node::Difference(self.clone(), other.clone())),
        }
    }

    pub fn product(&self, other: &Expr) -> Expr {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => Self::from_node(Node::Constant(a * b)),
            _ if self.is_zero() || other.is_zero() => Self::zero(),
            _ if other.is_one() => self.clone(),
            _ if self.is_one() => other.clone(),
            _ => Self::from_node(Node::Product(self.clone(), other.clone())),
        }
    }

    /// Quotient whose denominator is certified nonvanishing on the closed disc:
    /// its modulus exceeds [`QUOTIENT_FLOOR`] on a boundary and interior grid, and
    /// its winding number around 0 along the circle is zero.
    pub fn quotient(&self, den: &Expr) -> Result<Expr, FuncError> {
        certify_denominator(den)?;
        Ok(match (self.as_constant(), den.as_constant()) {
            (Some(a), Some(b)) => Self::from_node(Node::Constant(a / b)),
            _ => Self::from_node(Node::Quotient(self.clone(), den.clone())),
        })
    }

    /// `b_a(self) = (self - a) / (1 - conj(a) self)` for `|a| < 1`.
    pub fn mobius(&self, a: Complex64) -> Result<Expr, FuncError> {
        if !is_finite(a) {
            return Err(FuncError::NonFinite);
        }
        if a.norm() >= 1.0 {
            return Err(FuncError::MobiusParameter(a.norm()));
        }
        if a == Complex64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        if let Some(c) = self.as_constant() {
            return Ok(Self::from_node(Node::Constant(mobius_map(a, c)?)));
        }
        Ok(Self::from_node(Node::Mobius { a, arg: self.clone() }))
    }

    /// `scale * self + shift`.
    pub fn affine(&self, scale: Complex64, shift: Complex64) -> Result<Expr, FuncError> {
        if !is_finite(scale) || !is_finite(shift) {
            return Err(FuncError::NonFinite);
        }
        if let Some(c) = self.as_constant() {
            return Ok(Self::from_node(Node::Constant(scale * c + shift)));
        }
        if scale == Complex64::new(1.0, 0.0) && shift == Complex64::new(0.0, 0.0) {
            return Ok(self.clone());
        }
        Ok(Self::from_node(Node::Affine { scale, shift, arg: self.clone() }))
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, c: Complex64) -> Result<Expr, FuncError> {
        if c == Complex64::new(0.0, 0.0) {
            return Ok(Self::zero());
        }
        self.affine(c, Complex64::new(0.0, 0.0))
    }

    pub fn pow(&self, m: u32) -> Expr {
        match (m, self.as_constant()) {
            (0, _) => Self::one(),
            (1, _) => self.clone(),
            (_, Some(c)) => Self::from_node(Node::Constant(c.powu(m))),
            _ => Self::from_node(Node::Power { m, arg: self.clone() }),
        }
    }

    /// Principal `m`-th root `gamma(self)` with `gamma(1) = 1` and `gamma(0) = 0`.
    ///
    /// The argument must take values in `|z - 1/2| <= 1/2`; this is checked on the
    /// boundary grid and at the origin (by the maximum modulus principle applied to
    /// `self - 1/2` the boundary check covers the whole disc).
    pub fn principal_root(&self, m: u32) -> Result<Expr, FuncError> {
        if m == 0 {
            return Err(FuncError::RootOrder);
        }
        check_root_range(self)?;
        if let Some(c) = self.as_constant() {
            return Ok(Self::from_node(Node::Constant(principal_root_value(c, m))));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        Ok(Self::from_node(Node::Root { m, arg: self.clone() }))
    }

    /// Peak function of a finite set of boundary points given in turns.
    pub fn peak(angles: &[f64]) -> Result<Expr, FuncError> {
        if angles.is_empty() {
            return Err(FuncError::PeakSet("empty set".into()));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(FuncError::NonFinite);
        }
        let angles: Vec<f64> = angles.to_vec();
        let points = angles.iter().map(|&t| turns_to_point(t)).collect();
        Ok(Self::from_node(Node::Peak { angles, points }))
    }

    /// Evaluates at a point of the closed disc.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, FuncError> {
        if !is_finite(z) || z.norm() > 1.0 + DOMAIN_SLACK {
            return Err(FuncError::DomainViolation { re: z.re, im: z.im });
        }
        self.eval_inner(z)
    }

    fn eval_inner(&self, z: Complex64) -> Result<Complex64, FuncError> {
        Ok(match self.node() {
            Node::Constant(c) => *c,
            Node::Identity => z,
            Node::Sum(a, b) => a.eval_inner(z)? + b.eval_inner(z)?,
            Node::Difference(a, b) => a.eval_inner(z)? - b.eval_inner(z)?,
            Node::Product(a, b) => a.eval_inner(z)? * b.eval_inner(z)?,
            Node::Quotient(a, b) => {
                let den = b.eval_inner(z)?;
                if den.norm() < DEGENERATE_DENOMINATOR {
                    return Err(FuncError::DegenerateExpression {
                        modulus: den.norm(),
                        re: z.re,
                        im: z.im,
                    });
                }
                a.eval_inner(z)? / den
            }
            Node::Mobius { a, arg } => mobius_map(*a, arg.eval_inner(z)?)?,
            Node::Root { m, arg } => principal_root_value(arg.eval_inner(z)?, *m),
            Node::Power { m, arg } => arg.eval_inner(z)?.powu(*m),
            Node::Affine { scale, shift, arg } => scale * arg.eval_inner(z)? + shift,
            Node::Peak { points, .. } => peak_value(points, z),
        })
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Constant(_) | Node::Identity | Node::Peak { .. } => 0,
            Node::Sum(a, b) | Node::Difference(a, b) | Node::Product(a, b) | Node::Quotient(a, b) => {
                a.size() + b.size()
            }
            Node::Mobius { arg, .. }
            | Node::Root { arg, .. }
            | Node::Power { arg, .. }
            | Node::Affine { arg, .. } => arg.size(),
        }
    }
}

fn check_points() -> Vec<Complex64> {
    let mut pts = boundary_grid(CHECK_GRID);
    pts.push(Complex64::new(0.0, 0.0));
    pts
}

pub(crate) fn check_root_range(e: &Expr) -> Result<(), FuncError> {
    let samples = match e.as_constant() {
        Some(c) => vec![(Complex64::new(0.0, 0.0), c)],
        None => check_points()
            .into_iter()
            .map(|z| e.eval_inner(z).map(|v| (z, v)))
            .collect::<Result<Vec<_>, _>>()?,
    };
    for (z, v) in samples {
        let excess = delta_excess(v);
        if !is_finite(v) || excess > RANGE_SLACK {
            return Err(FuncError::RangeViolation { excess, re: z.re, im: z.im });
        }
    }
    Ok(())
}

pub(crate) fn certify_denominator(den: &Expr) -> Result<(), FuncError> {
    if let Some(c) = den.as_constant() {
        if c.norm() <= QUOTIENT_FLOOR {
            return Err(FuncError::UncertifiedDenominator(format!("constant of modulus {:e}", c.norm())));
        }
        return Ok(());
    }
    let boundary: Vec<Complex64> = boundary_grid(CHECK_GRID)
        .into_iter()
        .map(|z| den.eval_inner(z))
        .collect::<Result<_, _>>()?;
    let interior: Vec<Complex64> = interior_grid(64, 64)
        .into_iter()
        .map(|z| den.eval_inner(z))
        .collect::<Result<_, _>>()?;
    let min = boundary.iter().chain(&interior).map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min.is_nan() || min <= QUOTIENT_FLOOR {
        return Err(FuncError::UncertifiedDenominator(format!("minimum modulus {min:e} on the grid")));
    }
    // Argument principle: zero winding around the origin means no zeros inside.
    let mut turning = 0.0;
    for k in 0..boundary.len() {
        let next = boundary[(k + 1) % boundary.len()];
        turning += (next / boundary[k]).arg();
    }
    let winding = (turning / std::f64::consts::TAU).round();
    if winding != 0.0 {
        return Err(FuncError::UncertifiedDenominator(format!("{winding} zeros inside the disc")));
    }
    Ok(())
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        self.sum(&rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self.difference(&rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        self.product(&rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::zero().difference(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_evaluates_to_itself() {
        let e = Expr::real(0.3).unwrap();
        assert_eq!(e.eval(c(0.0, 1.0)).unwrap(), c(0.3, 0.0));
    }

    #[test]
    fn identity_and_mobius_zero() {
        assert_eq!(Expr::identity().eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
        let b = Expr::identity().mobius(c(0.5, 0.0)).unwrap();
        assert_eq!(b.eval(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn domain_violation_outside_disc() {
        let err = Expr::identity().eval(c(1.0 + 1e-9, 0.0)).unwrap_err();
        assert!(matches!(err, FuncError::DomainViolation { .. }));
        assert!(Expr::identity().eval(c(1.0 + 1e-13, 0.0)).is_ok());
    }

    #[test]
    fn non_finite_constants_rejected() {
        assert_eq!(Expr::real(f64::NAN).unwrap_err(), FuncError::NonFinite);
        assert!(Expr::identity().affine(c(f64::INFINITY, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn roots_of_constants() {
        assert_eq!(Expr::one().principal_root(7).unwrap().as_constant(), Some(c(1.0, 0.0)));
        assert_eq!(Expr::zero().principal_root(3).unwrap().as_constant(), Some(c(0.0, 0.0)));
        let v = Expr::real(1.0 / 6.0).unwrap().principal_root(3).unwrap();
        let expected = (1.0f64 / 6.0).cbrt();
        assert!((v.eval(c(0.2, -0.4)).unwrap() - c(expected, 0.0)).norm() < 1e-15);
        assert!((expected - 0.550321).abs() < 1e-6);
        assert_eq!(Expr::one().principal_root(0).unwrap_err(), FuncError::RootOrder);
    }

    #[test]
    fn root_range_is_enforced() {
        // identity takes the value -1, far outside the disc around 1/2
        let err = Expr::identity().principal_root(2).unwrap_err();
        assert!(matches!(err, FuncError::RangeViolation { .. }));
        // (1 + z) / 2 stays inside
        let half = Expr::identity().affine(c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert!(half.principal_root(3).is_ok());
    }

    #[test]
    fn quotient_certification() {
        // 2 - z never vanishes on the closed disc
        let den = Expr::identity().affine(c(-1.0, 0.0), c(2.0, 0.0)).unwrap();
        let q = Expr::one().quotient(&den).unwrap();
        assert!((q.eval(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        // z - 0.3 vanishes inside
        let bad = Expr::identity().affine(c(1.0, 0.0), c(-0.3, 0.0)).unwrap();
        assert!(matches!(Expr::one().quotient(&bad), Err(FuncError::UncertifiedDenominator(_))));
        // z^2 has a double zero at the origin, caught by the interior grid or the winding number
        let sq = Expr::identity().pow(2).affine(c(1.0, 0.0), c(1e-3, 0.0)).unwrap();
        assert!(Expr::one().quotient(&sq).is_err());
        assert!(Expr::one().quotient(&Expr::real(1e-7).unwrap()).is_err());
    }

    #[test]
    fn folding_keeps_values() {
        let z = Expr::identity();
        assert_eq!(z.product(&Expr::zero()), Expr::zero());
        assert_eq!(z.product(&Expr::one()), z);
        assert_eq!(z.mobius(c(0.0, 0.0)).unwrap(), z);
        let k = Expr::real(0.25).unwrap().mobius(c(-0.3, 0.0)).unwrap();
        assert!((k.as_constant().unwrap() - c(0.55 / 1.075, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn peak_is_one_on_its_set() {
        let r = Expr::peak(&[0.0]).unwrap();
        assert_eq!(r.eval(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(r.eval(c(1.0 - 1e-13, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((r.eval(c(0.0, 0.0)).unwrap() - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((r.eval(c(-1.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_denominator_at_eval() {
        // a Mobius map applied to a function reaching 1/conj(a) is degenerate there
        let two_z = Expr::identity().scale(c(2.0, 0.0)).unwrap();
        let m = two_z.mobius(c(0.5, 0.0)).unwrap();
        assert!(matches!(m.eval(c(1.0, 0.0)), Err(FuncError::DegenerateExpression { .. })));
    }
}
