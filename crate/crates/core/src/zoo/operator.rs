use std::sync::Arc;

use crate::chart::{Chart, FormField, PointFn, ScalarField, VectorField};
use crate::error::{GeomError, Result};
use crate::jet::{Num, Scalar};
use crate::linalg::{invert, mat_mul, mat_t_vec, mat_vec};

/// Pointwise linear map on vectors, stored as the matrix `L[i][j]` with
/// `λ(∂_j) = Σᵢ L[i][j] ∂ᵢ`.
#[derive(Clone)]
pub struct VectorOperatorField {
    dim: usize,
    matrix: Arc<PointFn<Vec<Vec<Num>>>>,
}

impl VectorOperatorField {
    pub fn new(dim: usize, f: impl Fn(&[Num]) -> Result<Vec<Vec<Num>>> + Send + Sync + 'static) -> Self {
        VectorOperatorField {
            dim,
            matrix: Arc::new(f),
        }
    }

    pub fn identity(dim: usize) -> Self {
        VectorOperatorField::new(dim, move |_| {
            Ok((0..dim)
                .map(|i| (0..dim).map(|j| Num::Real(f64::from(u8::from(i == j)))).collect())
                .collect())
        })
    }

    /// From an n×n matrix of scalar fields, rows first.
    pub fn from_fields(rows: Vec<Vec<ScalarField>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GeomError::domain("operator matrix must be square"));
        }
        Ok(VectorOperatorField::new(n, move |x| {
            rows.iter().map(|r| r.iter().map(|f| f.eval(x)).collect()).collect()
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, x: &[Num]) -> Result<Vec<Vec<Num>>> {
        (self.matrix)(x)
    }

    pub fn apply(&self, v: &VectorField) -> VectorField {
        let (m, v) = (self.clone(), v.clone());
        VectorField::new(self.dim, move |x| Ok(mat_vec(&m.matrix(x)?, &v.eval(x)?)))
    }

    /// Dual adjoint `λ^△`, with `⟨λ^△(ω), v⟩ = ⟨ω, λ(v)⟩`.
    pub fn adjoint(&self, w: &FormField) -> FormField {
        let (m, w) = (self.clone(), w.clone());
        FormField::new(self.dim, move |x| Ok(mat_t_vec(&m.matrix(x)?, &w.eval(x)?)))
    }

    /// Pointwise inverse; singular points surface when evaluated.
    pub fn inverse(&self) -> Self {
        let m = self.clone();
        VectorOperatorField::new(self.dim, move |x| Ok(invert(&m.matrix(x)?, "operator")?.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        VectorOperatorField::new(self.dim, move |x| Ok(mat_mul(&a.matrix(x)?, &b.matrix(x)?)))
    }

    /// Checks `|det| > 1e-8` on the chart's validation grid.
    pub fn validate_invertible(&self, chart: &Chart) -> Result<()> {
        for p in chart.validation_points() {
            let m = self.matrix(&Num::from_point(&p)).map_err(|e| e.at_point(&p))?;
            invert(&m, "operator").map_err(|e| e.at_point(&p))?;
        }
        Ok(())
    }

    /// Largest entry of `self − other` at `p`.
    pub fn distance_at(&self, other: &Self, p: &[f64]) -> Result<f64> {
        let x = Num::from_point(p);
        let (a, b) = (
            self.matrix(&x).map_err(|e| e.at_point(p))?,
            other.matrix(&x).map_err(|e| e.at_point(p))?,
        );
        Ok(a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .fold(0.0, |m, (x, y)| m.max((x.re() - y.re()).abs())))
    }
}
