//! Pairs of dual frame fields `{b_μ, β^μ}` and their structure coefficients.

use std::sync::Arc;

use crate::chart::{lie_bracket, Chart, FormField, PointFn, VectorField};
use crate::error::{GeomError, Result};
use crate::jet::{dot, Num, Scalar};
use crate::linalg::{invert, mat_t_vec, mat_vec};

/// Dual frame pair with components in the coordinate frame.
#[derive(Clone)]
pub struct FramePair {
    dim: usize,
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Coordinate,
    General {
        /// `[μ][i]` = bᵢ component of b_μ
        vectors: Arc<PointFn<Vec<Vec<Num>>>>,
        /// `[μ][i]` = βᵘᵢ
        coframe: Arc<PointFn<Vec<Vec<Num>>>>,
    },
}

/// Frame and coframe matrices at one point (and jet level).
#[derive(Clone, Debug)]
pub struct FrameValues {
    coordinate: bool,
    pub vectors: Vec<Vec<Num>>,
    pub coframe: Vec<Vec<Num>>,
}

impl FramePair {
    /// `{∂ᵢ, dxⁱ}`.
    pub fn coordinate(dim: usize) -> Self {
        FramePair {
            dim,
            kind: Kind::Coordinate,
        }
    }

    /// Frame from its vector fields; the coframe is the pointwise inverse.
    /// Invertibility is checked on the chart's validation grid.
    pub fn from_vectors(chart: &Chart, b: Vec<VectorField>) -> Result<Self> {
        let dim = chart.dim();
        if b.len() != dim || b.iter().any(|v| v.dim() != dim) {
            return Err(GeomError::domain(format!(
                "a frame on a {dim}-dimensional chart needs {dim} vector fields of dimension {dim}"
            )));
        }
        let b = Arc::new(b);
        let vectors: Arc<PointFn<Vec<Vec<Num>>>> = {
            let b = Arc::clone(&b);
            Arc::new(move |x| b.iter().map(|v| v.eval(x)).collect())
        };
        let coframe: Arc<PointFn<Vec<Vec<Num>>>> = {
            let vectors = Arc::clone(&vectors);
            Arc::new(move |x| {
                // rows of `vectors` are the b_μ, so (β)ᵘᵢ = (Bᵀ)⁻¹ ... transposed:
                // Σᵢ βᵘᵢ b_νⁱ = δᵘᵥ  ⇔  β · Bᵀ = I  with B[μ][i] = b_μⁱ
                let m = vectors(x)?;
                let (inv, _) = invert(&m, "frame")?;
                Ok(crate::linalg::transpose(&inv))
            })
        };
        let frame = FramePair {
            dim,
            kind: Kind::General { vectors, coframe },
        };
        frame.validate(chart)?;
        Ok(frame)
    }

    /// Frame with an explicitly supplied coframe; duality is checked to 1e-12.
    pub fn from_pair(chart: &Chart, b: Vec<VectorField>, beta: Vec<FormField>) -> Result<Self> {
        let dim = chart.dim();
        if b.len() != dim || beta.len() != dim {
            return Err(GeomError::domain("frame and coframe need n fields each"));
        }
        let vectors: Arc<PointFn<Vec<Vec<Num>>>> = Arc::new(move |x| b.iter().map(|v| v.eval(x)).collect());
        let coframe: Arc<PointFn<Vec<Vec<Num>>>> = Arc::new(move |x| beta.iter().map(|w| w.eval(x)).collect());
        let frame = FramePair {
            dim,
            kind: Kind::General { vectors, coframe },
        };
        for p in chart.validation_points() {
            let r = frame.duality_residual(&p)?;
            if r > 1e-12 {
                return Err(GeomError::domain(format!(
                    "coframe is not dual to the frame at {p:?} (residual {r:e})"
                )));
            }
        }
        Ok(frame)
    }

    fn validate(&self, chart: &Chart) -> Result<()> {
        for p in chart.validation_points() {
            self.values_at(&Num::from_point(&p)).map_err(|e| e.at_point(&p))?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_coordinate(&self) -> bool {
        matches!(self.kind, Kind::Coordinate)
    }

    pub fn values_at(&self, x: &[Num]) -> Result<FrameValues> {
        match &self.kind {
            Kind::Coordinate => {
                let id: Vec<Vec<Num>> = (0..self.dim)
                    .map(|i| (0..self.dim).map(|j| Num::Real(f64::from(u8::from(i == j)))).collect())
                    .collect();
                Ok(FrameValues {
                    coordinate: true,
                    vectors: id.clone(),
                    coframe: id,
                })
            }
            Kind::General { vectors, coframe } => Ok(FrameValues {
                coordinate: false,
                vectors: vectors(x)?,
                coframe: coframe(x)?,
            }),
        }
    }

    /// b_μ as a vector field.
    pub fn vector(&self, mu: usize) -> VectorField {
        match &self.kind {
            Kind::Coordinate => VectorField::basis(self.dim, mu),
            Kind::General { vectors, .. } => {
                let vectors = Arc::clone(vectors);
                VectorField::new(self.dim, move |x| Ok(vectors(x)?.swap_remove(mu)))
            }
        }
    }

    /// β^μ as a form field.
    pub fn coform(&self, mu: usize) -> FormField {
        match &self.kind {
            Kind::Coordinate => FormField::basis(self.dim, mu),
            Kind::General { coframe, .. } => {
                let coframe = Arc::clone(coframe);
                FormField::new(self.dim, move |x| Ok(coframe(x)?.swap_remove(mu)))
            }
        }
    }

    pub fn vectors(&self) -> Vec<VectorField> {
        (0..self.dim).map(|m| self.vector(m)).collect()
    }

    pub fn coforms(&self) -> Vec<FormField> {
        (0..self.dim).map(|m| self.coform(m)).collect()
    }

    /// max |⟨β^μ, b_ν⟩ − δ^μ_ν| at `p`.
    pub fn duality_residual(&self, p: &[f64]) -> Result<f64> {
        let v = self.values_at(&Num::from_point(p)).map_err(|e| e.at_point(p))?;
        let mut worst: f64 = 0.0;
        for (mu, beta) in v.coframe.iter().enumerate() {
            for (nu, b) in v.vectors.iter().enumerate() {
                let d = dot(beta, b).re() - if mu == nu { 1.0 } else { 0.0 };
                worst = worst.max(d.abs());
            }
        }
        Ok(worst)
    }
}

impl FrameValues {
    /// Frame components ⟨β^μ, v⟩ of a coordinate-component vector.
    pub fn up(&self, v: &[Num]) -> Vec<Num> {
        if self.coordinate {
            return v.to_vec();
        }
        mat_vec(&self.coframe, v)
    }

    /// Frame components ω(b_μ) of a coordinate-component form.
    pub fn down(&self, w: &[Num]) -> Vec<Num> {
        if self.coordinate {
            return w.to_vec();
        }
        mat_vec(&self.vectors, w)
    }

    /// Coordinate components of Σ c^μ b_μ.
    pub fn vector_from(&self, c: &[Num]) -> Vec<Num> {
        if self.coordinate {
            return c.to_vec();
        }
        mat_t_vec(&self.vectors, c)
    }

    /// Coordinate components of Σ c_μ β^μ.
    pub fn form_from(&self, c: &[Num]) -> Vec<Num> {
        if self.coordinate {
            return c.to_vec();
        }
        mat_t_vec(&self.coframe, c)
    }

    /// Drops the outermost jet level of every entry.
    pub fn unlift(&self) -> FrameValues {
        let strip = |m: &Vec<Vec<Num>>| -> Vec<Vec<Num>> {
            m.iter()
                .map(|row| row.iter().map(|x| x.clone().unlift(0).0).collect())
                .collect()
        };
        FrameValues {
            coordinate: self.coordinate,
            vectors: strip(&self.vectors),
            coframe: strip(&self.coframe),
        }
    }
}

/// Coframe of a frame given by its vector fields.
pub fn dual_frame(chart: &Chart, b: Vec<VectorField>) -> Result<Vec<FormField>> {
    Ok(FramePair::from_vectors(chart, b)?.coforms())
}

/// Flat index of `c^σ_{μν}` (and of connection coefficients `Γ^σ_{μν}`).
pub fn idx3(n: usize, sigma: usize, mu: usize, nu: usize) -> usize {
    (sigma * n + mu) * n + nu
}

/// `c^σ_{μν}(p) = ⟨β^σ, [b_μ, b_ν]⟩(p)`, flattened by [`idx3`].
pub fn structure_coefficients(frame: &FramePair, p: &[f64]) -> Result<Vec<f64>> {
    let n = frame.dim();
    let x = Num::from_point(p);
    let fv = frame.values_at(&x).map_err(|e| e.at_point(p))?;
    let mut out = vec![0.0; n * n * n];
    for mu in 0..n {
        for nu in 0..n {
            let br = lie_bracket(&frame.vector(mu), &frame.vector(nu))
                .eval(&x)
                .map_err(|e| e.at_point(p))?;
            for (sigma, c) in fv.up(&br).iter().enumerate() {
                out[idx3(n, sigma, mu, nu)] = c.re();
            }
        }
    }
    Ok(out)
}
