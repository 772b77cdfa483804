//! Pointwise evaluation of a single quantity for the `evaluate` command.
//!
//! Arguments name vector and form fields:
//!
//! | token            | meaning                                   |
//! |------------------|-------------------------------------------|
//! | `e_th`, `e_2`    | coordinate vector ∂_th, ∂_2               |
//! | `dth`, `dx1`     | coordinate covector                       |
//! | `b_2`            | vector 2 of the configured frame          |
//! | `beta_2`         | covector 2 of the configured coframe      |
//! | `v:EXPR;EXPR`    | vector field with the given components    |
//! | `w:EXPR;EXPR`    | form field with the given components      |
//!
//! Indices are 1-based, as in config files.

use std::fmt;
use std::str::FromStr;

use parstruct_core::cartan::{covariant_curl, gamma_minus, gamma_plus, CurvatureFamily, TorsionFamily};
use parstruct_core::expr::compile;
use parstruct_core::{FormField, KForm, ScalarField, VectorField};
use serde::Serialize;

use crate::config::SpecConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    NablaV,
    NablaForm,
    GammaPlus,
    GammaMinus,
    Torsion,
    Theta,
    Rho,
    Omega,
    Curl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Vector,
    Form,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::NablaV,
        Quantity::NablaForm,
        Quantity::GammaPlus,
        Quantity::GammaMinus,
        Quantity::Torsion,
        Quantity::Theta,
        Quantity::Rho,
        Quantity::Omega,
        Quantity::Curl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::NablaV => "nabla_v",
            Quantity::NablaForm => "nabla_form",
            Quantity::GammaPlus => "gamma_plus",
            Quantity::GammaMinus => "gamma_minus",
            Quantity::Torsion => "torsion",
            Quantity::Theta => "theta",
            Quantity::Rho => "rho",
            Quantity::Omega => "omega",
            Quantity::Curl => "curl",
        }
    }

    fn signature(self) -> &'static [Kind] {
        use Kind::{Form as F, Vector as V};
        match self {
            Quantity::NablaV | Quantity::Torsion => &[V, V],
            Quantity::NablaForm | Quantity::GammaPlus | Quantity::GammaMinus | Quantity::Omega => &[V, F],
            Quantity::Theta | Quantity::Curl => &[F],
            Quantity::Rho => &[V, V, V],
        }
    }

    pub fn usage(self) -> &'static str {
        match self {
            Quantity::NablaV => "nabla_v A V: ∇_A V",
            Quantity::NablaForm => "nabla_form A W: ∇_A W",
            Quantity::GammaPlus => "gamma_plus V W: Γ⁺(V, W)",
            Quantity::GammaMinus => "gamma_minus V W: Γ⁻(V, W)",
            Quantity::Torsion => "torsion A B: τ(A, B)",
            Quantity::Theta => "theta W: Θ(W)",
            Quantity::Rho => "rho A B C: ρ(A, B, C)",
            Quantity::Omega => "omega C W: Ω(C, W)",
            Quantity::Curl => "curl W: covariant curl of W",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Quantity::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| {
            let names: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
            format!("unknown quantity '{s}' (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Clone)]
enum Arg {
    Vector(VectorField),
    Form(FormField),
}

/// Value in coordinate components.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "components", rename_all = "lowercase")]
pub enum Evaluated {
    Vector(Vec<f64>),
    Form(Vec<f64>),
    /// Components at `i < j` in lexicographic order.
    Biform(Vec<f64>),
}

/// Printed components below this magnitude are shown as 0.
const PRINT_ZERO: f64 = 1e-12;

fn show(x: f64) -> String {
    if x.abs() < PRINT_ZERO {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if (1e-4..1e9).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub struct Display<'a> {
    value: &'a Evaluated,
    names: &'a [String],
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |c: &[f64]| c.iter().map(|x| show(*x)).collect::<Vec<_>>().join(", ");
        match self.value {
            Evaluated::Vector(c) => write!(f, "vector ({})", list(c)),
            Evaluated::Form(c) => write!(f, "1-form ({})", list(c)),
            Evaluated::Biform(c) => {
                let n = self.names.len();
                let mut terms = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if c[k].abs() >= PRINT_ZERO {
                            terms.push(format!("{} d{}∧d{}", show(c[k]), self.names[i], self.names[j]));
                        }
                        k += 1;
                    }
                }
                if terms.is_empty() {
                    write!(f, "biform 0")
                } else {
                    write!(f, "biform {}", terms.join(" + ").replace("+ -", "- "))
                }
            }
        }
    }
}

impl Evaluated {
    pub fn display<'a>(&'a self, names: &'a [String]) -> Display<'a> {
        Display { value: self, names }
    }

    pub fn components(&self) -> &[f64] {
        match self {
            Evaluated::Vector(c) | Evaluated::Form(c) | Evaluated::Biform(c) => c,
        }
    }
}

fn parse_index(s: &str, n: usize, token: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
        _ => Err(format!("'{token}': index must be in 1..{n}")),
    }
}

fn components(cfg: &SpecConfig, body: &str, token: &str) -> Result<Vec<ScalarField>, String> {
    let parts: Vec<&str> = body.split(';').collect();
    if parts.len() != cfg.chart.dim() {
        return Err(format!(
            "'{token}': expected {} components separated by ';'",
            cfg.chart.dim()
        ));
    }
    parts
        .iter()
        .map(|p| {
            compile(p.trim(), cfg.chart.names())
                .map(ScalarField::from_expr)
                .map_err(|e| format!("'{token}': {e}"))
        })
        .collect()
}

fn parse_arg(cfg: &SpecConfig, token: &str) -> Result<Arg, String> {
    let n = cfg.chart.dim();
    let names = cfg.chart.names();
    if let Some(body) = token.strip_prefix("v:") {
        return Ok(Arg::Vector(VectorField::from_components(components(cfg, body, token)?)));
    }
    if let Some(body) = token.strip_prefix("w:") {
        return Ok(Arg::Form(FormField::from_components(components(cfg, body, token)?)));
    }
    if let Some(k) = token.strip_prefix("beta_") {
        return Ok(Arg::Form(cfg.frame.coform(parse_index(k, n, token)?)));
    }
    if let Some(k) = token.strip_prefix("b_") {
        return Ok(Arg::Vector(cfg.frame.vector(parse_index(k, n, token)?)));
    }
    if let Some(c) = token.strip_prefix("e_") {
        let i = match names.iter().position(|x| x == c) {
            Some(i) => i,
            None => parse_index(c, n, token)?,
        };
        return Ok(Arg::Vector(VectorField::basis(n, i)));
    }
    if let Some(i) = token.strip_prefix('d').and_then(|c| names.iter().position(|x| x == c)) {
        return Ok(Arg::Form(FormField::basis(n, i)));
    }
    Err(format!(
        "cannot read argument '{token}' (expected e_NAME, dNAME, b_K, beta_K, v:..., or w:...)"
    ))
}

/// Evaluates `q` on the argument tokens at `p`.
pub fn evaluate(cfg: &SpecConfig, q: Quantity, args: &[String], p: &[f64]) -> Result<Evaluated, String> {
    let sig = q.signature();
    if args.len() != sig.len() {
        return Err(format!("{} takes {} arguments: {}", q.name(), sig.len(), q.usage()));
    }
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    for (token, kind) in args.iter().zip(sig) {
        match (parse_arg(cfg, token)?, kind) {
            (Arg::Vector(v), Kind::Vector) => vs.push(v),
            (Arg::Form(w), Kind::Form) => ws.push(w),
            (_, Kind::Vector) => return Err(format!("'{token}' is a form; {} expects a vector here", q.name())),
            (_, Kind::Form) => return Err(format!("'{token}' is a vector; {} expects a form here", q.name())),
        }
    }
    let g = &cfg.connection;
    let frame = g.frame();
    let biform = |k: KForm| Evaluated::Biform(k.components().to_vec());
    let r = match q {
        Quantity::NablaV => g.nabla(&vs[0], &vs[1]).at(p).map(Evaluated::Vector),
        Quantity::NablaForm => g.nabla_form(&vs[0], &ws[0]).at(p).map(Evaluated::Form),
        Quantity::GammaPlus => gamma_plus(g, frame, &vs[0], &ws[0]).at(p).map(Evaluated::Form),
        Quantity::GammaMinus => gamma_minus(g, frame, &vs[0], &ws[0]).at(p).map(Evaluated::Form),
        Quantity::Torsion => TorsionFamily::new(g, frame)
            .tau_at(&vs[0], &vs[1], p)
            .map(Evaluated::Vector),
        Quantity::Theta => TorsionFamily::new(g, frame).theta(&ws[0], p).map(biform),
        Quantity::Rho => CurvatureFamily::new(g, frame)
            .rho_at(&vs[0], &vs[1], &vs[2], p)
            .map(Evaluated::Vector),
        Quantity::Omega => CurvatureFamily::new(g, frame).omega(&vs[0], &ws[0], p).map(biform),
        Quantity::Curl => covariant_curl(g, frame, &ws[0], p).map(biform),
    };
    r.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        assert_eq!(show(0.7500000000000001), "0.75");
        assert_eq!(show(-3e-17), "0");
        assert_eq!(show(-0.4330127018922193), "-0.433012701892");
        assert_eq!(show(2.0), "2");
        assert_eq!(show(1.5e-7), "1.5e-7");
        let names = vec!["x1".to_string(), "x2".to_string()];
        let b = Evaluated::Biform(vec![-0.25]);
        assert_eq!(b.display(&names).to_string(), "biform -0.25 dx1∧dx2");
        assert_eq!(Evaluated::Biform(vec![1e-18]).display(&names).to_string(), "biform 0");
    }
}
