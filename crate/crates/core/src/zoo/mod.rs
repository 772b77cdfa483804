//! Special classes of parallelism structures: symmetric structures,
//! λ-deformations, relative structures, the split theorem and Jacobian
//! fields.

mod deformation;
mod operator;
mod relative;
mod symmetric;

pub use deformation::{deform, Deformation};
pub use operator::VectorOperatorField;
pub use relative::{compatibility_residual, JacobianField, RelativeStructure, SplitDecomposition};
pub use symmetric::{bianchi_residual, cyclic_residual, is_symmetric, SymmetryReport};

use crate::jet::{Num, Scalar};

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

pub(crate) fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub(crate) fn reals(v: &[Num]) -> Vec<f64> {
    v.iter().map(Num::re).collect()
}
