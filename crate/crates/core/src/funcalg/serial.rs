//! JSON form of expressions: `{"op": <kind>, "args": [...], "param": ...}`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::expr::{certify_denominator, check_root_range};
use super::{is_finite, Expr, FuncError, Node};

/// Complex scalar as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(z: Complex64) -> Self {
        ComplexRecord { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Complex(ComplexRecord),
    Order(u32),
    Affine { scale: ComplexRecord, shift: ComplexRecord },
    Angles { angle_turns: Vec<f64> },
}

/// Serialized expression node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprDocument {
    pub op: String,
    #[serde(default)]
    pub args: Vec<ExprDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<Param>,
}

impl From<&Expr> for ExprDocument {
    fn from(e: &Expr) -> Self {
        let doc = |op: &str, args: Vec<ExprDocument>, param: Option<Param>| ExprDocument {
            op: op.to_string(),
            args,
            param,
        };
        match e.node() {
            Node::Constant(c) => doc("constant", vec![], Some(Param::Complex((*c).into()))),
            Node::Identity => doc("identity", vec![], None),
            Node::Sum(a, b) => doc("sum", vec![a.into(), b.into()], None),
            Node::Difference(a, b) => doc("difference", vec![a.into(), b.into()], None),
            Node::Product(a, b) => doc("product", vec![a.into(), b.into()], None),
            Node::Quotient(a, b) => doc("quotient", vec![a.into(), b.into()], None),
            Node::Mobius { a, arg } => doc("mobius", vec![arg.into()], Some(Param::Complex((*a).into()))),
            Node::Root { m, arg } => doc("root", vec![arg.into()], Some(Param::Order(*m))),
            Node::Power { m, arg } => doc("power", vec![arg.into()], Some(Param::Order(*m))),
            Node::Affine { scale, shift, arg } => doc(
                "affine",
                vec![arg.into()],
                Some(Param::Affine { scale: (*scale).into(), shift: (*shift).into() }),
            ),
            Node::Peak { angles, .. } => doc("peak", vec![], Some(Param::Angles { angle_turns: angles.clone() })),
        }
    }
}

fn complex_param(doc: &ExprDocument) -> Result<Complex64, FuncError> {
    match &doc.param {
        Some(Param::Complex(r)) => {
            let z = Complex64::from(*r);
            if is_finite(z) {
                Ok(z)
            } else {
                Err(FuncError::NonFinite)
            }
        }
        _ => Err(FuncError::Parse(format!("'{}' needs a complex param", doc.op))),
    }
}

fn order_param(doc: &ExprDocument) -> Result<u32, FuncError> {
    match &doc.param {
        Some(Param::Order(m)) => Ok(*m),
        _ => Err(FuncError::Parse(format!("'{}' needs an integer param", doc.op))),
    }
}

impl TryFrom<&ExprDocument> for Expr {
    type Error = FuncError;

    /// Rebuilds the tree node for node, without constant folding, re-running the
    /// construction-time checks on quotients, roots and Mobius parameters.
    fn try_from(doc: &ExprDocument) -> Result<Self, FuncError> {
        let arity = match doc.op.as_str() {
            "constant" | "identity" | "peak" => 0,
            "sum" | "difference" | "product" | "quotient" => 2,
            "mobius" | "root" | "power" | "affine" => 1,
            other => return Err(FuncError::Parse(format!("unknown op '{other}'"))),
        };
        if doc.args.len() != arity {
            return Err(FuncError::Parse(format!(
                "'{}' takes {arity} args, found {}",
                doc.op,
                doc.args.len()
            )));
        }
        let args = doc.args.iter().map(Expr::try_from).collect::<Result<Vec<_>, _>>()?;
        let arg = |i: usize| args[i].clone();
        let node = match doc.op.as_str() {
            "constant" => Node::Constant(complex_param(doc)?),
            "identity" => Node::Identity,
            "sum" => Node::Sum(arg(0), arg(1)),
            "difference" => Node::Difference(arg(0), arg(1)),
            "product" => Node::Product(arg(0), arg(1)),
            "quotient" => {
                certify_denominator(&args[1])?;
                Node::Quotient(arg(0), arg(1))
            }
            "mobius" => {
                let a = complex_param(doc)?;
                if a.norm() >= 1.0 {
                    return Err(FuncError::MobiusParameter(a.norm()));
                }
                Node::Mobius { a, arg: arg(0) }
            }
            "root" => {
                let m = order_param(doc)?;
                if m == 0 {
                    return Err(FuncError::RootOrder);
                }
                check_root_range(&args[0])?;
                Node::Root { m, arg: arg(0) }
            }
            "power" => Node::Power { m: order_param(doc)?, arg: arg(0) },
            "affine" => match &doc.param {
                Some(Param::Affine { scale, shift }) => {
                    let (scale, shift) = (Complex64::from(*scale), Complex64::from(*shift));
                    if !is_finite(scale) || !is_finite(shift) {
                        return Err(FuncError::NonFinite);
                    }
                    Node::Affine { scale, shift, arg: arg(0) }
                }
                _ => return Err(FuncError::Parse("'affine' needs {scale, shift}".into())),
            },
            "peak" => match &doc.param {
                Some(Param::Angles { angle_turns }) => return Expr::peak(angle_turns),
                _ => return Err(FuncError::Parse("'peak' needs {angle_turns}".into())),
            },
            _ => unreachable!(),
        };
        Ok(Expr::from_node(node))
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExprDocument::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ExprDocument::deserialize(deserializer)?;
        Expr::try_from(&doc).map_err(serde::de::Error::custom)
    }
}

impl Expr {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Expr, FuncError> {
        let doc: ExprDocument = serde_json::from_str(text).map_err(|e| FuncError::Parse(e.to_string()))?;
        Expr::try_from(&doc)
    }
}
