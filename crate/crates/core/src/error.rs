use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    /// Violated algebraic precondition (grade overflow, bad index, arity).
    #[error("domain error: {0}")]
    Domain(String),

    /// A field could not be evaluated at a point.
    #[error("evaluation error at {point:?}: {message}")]
    Eval { message: String, point: Vec<f64> },

    /// Frame or operator matrix is not invertible at a sampled point.
    #[error("singular {what} at {point:?} (|det| = {det:e})")]
    Singular { what: String, point: Vec<f64>, det: f64 },

    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl GeomError {
    pub fn domain(msg: impl Into<String>) -> Self {
        GeomError::Domain(msg.into())
    }

    /// Attaches a point to errors that do not carry one yet.
    pub fn at_point(self, p: &[f64]) -> Self {
        match self {
            GeomError::Expr(e) => GeomError::Eval {
                message: e.to_string(),
                point: p.to_vec(),
            },
            GeomError::Eval { message, point } if point.is_empty() => GeomError::Eval {
                message,
                point: p.to_vec(),
            },
            GeomError::Singular { what, point, det } if point.is_empty() => GeomError::Singular {
                what,
                point: p.to_vec(),
                det,
            },
            other => other,
        }
    }
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
