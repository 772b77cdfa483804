use std::sync::Arc;

use super::ast::{BinOp, Expr, Func};
use super::ExprError;
use crate::jet::Scalar;

/// An expression with variables resolved to slot indices.
///
/// Evaluation is generic over [`Scalar`], so the same tree runs on `f64`,
/// `Jet<f64>`, nested jets and [`crate::jet::Num`].
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    root: Arc<Node>,
    source: Arc<Expr>,
}

#[derive(Debug)]
enum Node {
    Const(f64),
    Slot(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    /// Constant integer exponent, evaluated by repeated multiplication.
    PowInt(Box<Node>, i32),
    Pow(Box<Node>, Box<Node>),
    Unary(Func, Box<Node>),
}

impl Expr {
    /// Resolves variables against `names`; every free variable must appear.
    pub fn compile<S: AsRef<str>>(&self, names: &[S]) -> Result<CompiledExpr, ExprError> {
        Ok(CompiledExpr {
            root: Arc::new(lower(self, names)?),
            source: Arc::new(self.clone()),
        })
    }

    /// Evaluates with explicit `(name, value)` bindings.
    pub fn evaluate<S: Scalar>(&self, bindings: &[(&str, S)]) -> Result<S, ExprError> {
        let names: Vec<&str> = bindings.iter().map(|(n, _)| *n).collect();
        let values: Vec<S> = bindings.iter().map(|(_, v)| v.clone()).collect();
        self.compile(&names)?.eval(&values)
    }
}

fn lower<S: AsRef<str>>(e: &Expr, names: &[S]) -> Result<Node, ExprError> {
    let sub = |x: &Expr| lower(x, names).map(Box::new);
    Ok(match e {
        Expr::Num(v) => Node::Const(*v),
        Expr::Var(name) => names
            .iter()
            .position(|n| n.as_ref() == name)
            .map(Node::Slot)
            .ok_or_else(|| ExprError::UnboundVariable(name.clone()))?,
        Expr::Neg(x) => Node::Neg(sub(x)?),
        Expr::Binary(op, a, b) => match op {
            BinOp::Add => Node::Add(sub(a)?, sub(b)?),
            BinOp::Sub => Node::Sub(sub(a)?, sub(b)?),
            BinOp::Mul => Node::Mul(sub(a)?, sub(b)?),
            BinOp::Div => Node::Div(sub(a)?, sub(b)?),
            BinOp::Pow => lower_pow(sub(a)?, b, names)?,
        },
        Expr::Call(Func::Pow, args) => lower_pow(sub(&args[0])?, &args[1], names)?,
        Expr::Call(f, args) => Node::Unary(*f, sub(&args[0])?),
    })
}

fn lower_pow<S: AsRef<str>>(base: Box<Node>, exp: &Expr, names: &[S]) -> Result<Node, ExprError> {
    if exp.is_constant() {
        let k: f64 = exp.evaluate::<f64>(&[])?;
        if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
            return Ok(Node::PowInt(base, k as i32));
        }
    }
    Ok(Node::Pow(base, Box::new(lower(exp, names)?)))
}

fn domain(msg: impl Into<String>) -> ExprError {
    ExprError::Domain(msg.into())
}

impl CompiledExpr {
    pub fn source(&self) -> &Expr {
        &self.source
    }

    pub fn eval<S: Scalar>(&self, slots: &[S]) -> Result<S, ExprError> {
        eval_node(&self.root, slots)
    }
}

fn eval_node<S: Scalar>(node: &Node, x: &[S]) -> Result<S, ExprError> {
    Ok(match node {
        Node::Const(v) => S::from_f64(*v),
        Node::Slot(i) => x
            .get(*i)
            .cloned()
            .ok_or_else(|| ExprError::UnboundVariable(format!("slot {i}")))?,
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Add(a, b) => eval_node(a, x)? + eval_node(b, x)?,
        Node::Sub(a, b) => eval_node(a, x)? - eval_node(b, x)?,
        Node::Mul(a, b) => eval_node(a, x)? * eval_node(b, x)?,
        Node::Div(a, b) => {
            let den = eval_node(b, x)?;
            if den.re() == 0.0 {
                return Err(domain("division by zero"));
            }
            eval_node(a, x)? / den
        }
        Node::PowInt(a, k) => {
            let base = eval_node(a, x)?;
            if *k < 0 && base.re() == 0.0 {
                return Err(domain("zero raised to a negative power"));
            }
            base.powi(*k)
        }
        Node::Pow(a, b) => {
            let base = eval_node(a, x)?;
            if base.re() <= 0.0 {
                return Err(domain(format!("non-integer power of non-positive base {}", base.re())));
            }
            base.powf(&eval_node(b, x)?)
        }
        Node::Unary(f, a) => {
            let v = eval_node(a, x)?;
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Tan => v.tan(),
                Func::Exp => v.exp(),
                Func::Log => {
                    if v.re() <= 0.0 {
                        return Err(domain(format!("log of non-positive value {}", v.re())));
                    }
                    v.ln()
                }
                Func::Sqrt => {
                    if v.re() < 0.0 {
                        return Err(domain(format!("sqrt of negative value {}", v.re())));
                    }
                    v.sqrt()
                }
                Func::Pow => unreachable!("pow is lowered separately"),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse_str;
    use super::*;
    use crate::jet::Jet;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scalar_calculator_value() {
        let e = parse_str("-sin(th)*cos(th)").unwrap();
        let v: f64 = e.evaluate(&[("th", std::f64::consts::FRAC_PI_3)]).unwrap();
        assert_abs_diff_eq!(v, -0.433_012_701_892_219_3, epsilon = 1e-15);
    }

    #[test]
    fn identity_on_jets() {
        let e = parse_str("x1").unwrap();
        let j = Jet::variable(2.0, 0, 1);
        let out = e.evaluate(&[("x1", j.clone())]).unwrap();
        assert_eq!(out, j);
    }

    #[test]
    fn square_derivative_matches_central_difference() {
        let e = parse_str("x1^2").unwrap();
        let d = e.evaluate(&[("x1", Jet::variable(3.0, 0, 1))]).unwrap().partials[0];
        let h = 1e-6;
        let f = |x: f64| e.evaluate(&[("x1", x)]).unwrap();
        let fd = (f(3.0 + h) - f(3.0 - h)) / (2.0 * h);
        assert_eq!(d, 6.0);
        assert_abs_diff_eq!(d, fd, epsilon = 1e-6);
    }

    #[test]
    fn domain_errors_propagate() {
        let cases = ["1/(x-x)", "log(x-2)", "sqrt(-x)", "(-x)^0.5", "0^(-1)"];
        for src in cases {
            let e = parse_str(src).unwrap();
            assert!(matches!(e.evaluate(&[("x", 1.0)]), Err(ExprError::Domain(_))), "{src}");
        }
        assert_eq!(parse_str("(-x)^3").unwrap().evaluate(&[("x", 2.0)]), Ok(-8.0));
    }

    #[test]
    fn unbound_variable_is_rejected_at_compile() {
        let e = parse_str("x + y").unwrap();
        assert_eq!(e.compile(&["x"]).unwrap_err(), ExprError::UnboundVariable("y".into()));
    }
}
