use crate::cartan::{bivector, TorsionFamily};
use crate::chart::{exterior_derivative_1form, Chart, FormField, VectorField};
use crate::connection::Connection;
use crate::error::Result;
use crate::exterior::{pair, KForm};
use crate::frame::FramePair;
use crate::jet::{dot, Num};
use crate::linalg::{mat_mul, transpose};
use crate::zoo::{max_abs, max_diff, reals, VectorOperatorField};

/// The relative structure of a frame: the connection with `∂_a b_μ = 0`.
#[derive(Clone)]
pub struct RelativeStructure {
    frame: FramePair,
    connection: Connection,
}

impl RelativeStructure {
    /// All coefficients vanish in the frame's own basis.
    pub fn new(frame: FramePair) -> Self {
        let n = frame.dim();
        let connection = Connection::new(frame.clone(), move |_| Ok(vec![Num::Real(0.0); n * n * n]));
        RelativeStructure { frame, connection }
    }

    /// Fails on a frame that is singular somewhere on the chart's grid.
    pub fn from_vectors(chart: &Chart, b: Vec<VectorField>) -> Result<Self> {
        Ok(RelativeStructure::new(FramePair::from_vectors(chart, b)?))
    }

    pub fn frame(&self) -> &FramePair {
        &self.frame
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    /// `max_μ |∂_a b_μ|`.
    pub fn rps3_residual(&self, a: &VectorField, p: &[f64]) -> Result<f64> {
        self.frame
            .vectors()
            .iter()
            .try_fold(0.0, |m: f64, b| Ok(m.max(max_abs(&self.connection.nabla(a, b).at(p)?))))
    }

    /// `max_ν |∂_a β^ν|`.
    pub fn rps5_residual(&self, a: &VectorField, p: &[f64]) -> Result<f64> {
        self.frame.coforms().iter().try_fold(0.0, |m: f64, beta| {
            Ok(m.max(max_abs(&self.connection.nabla_form(a, beta).at(p)?)))
        })
    }

    fn d_beta(&self, p: &[f64]) -> Result<Vec<KForm>> {
        self.frame
            .coforms()
            .iter()
            .map(|beta| exterior_derivative_1form(beta, p))
            .collect()
    }

    /// `τ(a,b)` by the frame formula `dβ^σ(a,b) b_σ`.
    pub fn torsion_from_frame(&self, a: &VectorField, b: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        let ab = bivector(&a.at(p)?, &b.at(p)?)?;
        let fv = self.frame.values_at(&Num::from_point(p)).map_err(|e| e.at_point(p))?;
        let mut out = vec![0.0; self.frame.dim()];
        for (db, b_sigma) in self.d_beta(p)?.iter().zip(&fv.vectors) {
            let k = pair(db, &ab)?;
            for (o, c) in out.iter_mut().zip(reals(b_sigma)) {
                *o += k * c;
            }
        }
        Ok(out)
    }

    /// `Θ(ω)` by the frame formula `⟨ω, b_σ⟩ dβ^σ`.
    pub fn theta_from_frame(&self, w: &FormField, p: &[f64]) -> Result<KForm> {
        let fv = self.frame.values_at(&Num::from_point(p)).map_err(|e| e.at_point(p))?;
        let wv = w.at(p)?;
        let mut out = KForm::zero(self.frame.dim(), 2)?;
        for (db, b_sigma) in self.d_beta(p)?.iter().zip(&fv.vectors) {
            out = out.try_add(&db.scale(dot(&wv, &reals(b_sigma))))?;
        }
        Ok(out)
    }

    /// `|τ(a,b) − dβ^σ(a,b) b_σ|`.
    pub fn rps6_residual(&self, a: &VectorField, b: &VectorField, p: &[f64]) -> Result<f64> {
        let tau = TorsionFamily::new(&self.connection, &self.frame).tau_at(a, b, p)?;
        Ok(max_diff(&tau, &self.torsion_from_frame(a, b, p)?))
    }

    /// `|Θ(ω) − ⟨ω, b_σ⟩ dβ^σ|`.
    pub fn rps7_residual(&self, w: &FormField, p: &[f64]) -> Result<f64> {
        let theta = TorsionFamily::new(&self.connection, &self.frame).theta(w, p)?;
        Ok(theta.try_sub(&self.theta_from_frame(w, p)?)?.max_abs())
    }
}

/// `Γ = B + γ` for a connection Γ and the relative connection B of a frame.
#[derive(Clone)]
pub struct SplitDecomposition {
    conn: Connection,
    relative: RelativeStructure,
}

impl SplitDecomposition {
    pub fn new(conn: &Connection, frame: FramePair) -> Self {
        SplitDecomposition {
            conn: conn.clone(),
            relative: RelativeStructure::new(frame),
        }
    }

    pub fn relative(&self) -> &RelativeStructure {
        &self.relative
    }

    /// `γ(a, v) = β^μ(v) ∇_a b_μ`.
    pub fn gamma(&self, a: &VectorField, v: &VectorField) -> VectorField {
        let frame = self.relative.frame.clone();
        let nab: Vec<VectorField> = frame.vectors().iter().map(|b| self.conn.nabla(a, b)).collect();
        let v = v.clone();
        VectorField::new(frame.dim(), move |x| {
            let coeffs = frame.values_at(x)?.up(&v.eval(x)?);
            let mut out = vec![Num::Real(0.0); coeffs.len()];
            for (c, d) in coeffs.iter().zip(&nab) {
                for (o, di) in out.iter_mut().zip(d.eval(x)?) {
                    *o = o.clone() + c.clone() * di;
                }
            }
            Ok(out)
        })
    }

    /// Dual adjoint of `γ_a = γ(a, ·)`: `(γ_a^△ ω)(v) = ⟨ω, γ(a, v)⟩`.
    pub fn gamma_adjoint(&self, a: &VectorField, w: &FormField) -> FormField {
        let frame = self.relative.frame.clone();
        let nab: Vec<VectorField> = frame.vectors().iter().map(|b| self.conn.nabla(a, b)).collect();
        let w = w.clone();
        FormField::new(frame.dim(), move |x| {
            let wv = w.eval(x)?;
            let c: Vec<Num> = nab.iter().map(|d| Ok(dot(&wv, &d.eval(x)?))).collect::<Result<_>>()?;
            Ok(frame.values_at(x)?.form_from(&c))
        })
    }

    /// `|Γ(a,v) − B(a,v) − γ(a,v)|`.
    pub fn sth2_residual(&self, a: &VectorField, v: &VectorField, p: &[f64]) -> Result<f64> {
        let split = self.relative.connection.nabla(a, v).add(&self.gamma(a, v));
        Ok(max_diff(&self.conn.nabla(a, v).at(p)?, &split.at(p)?))
    }

    /// `|∇_a ω − (∂_a ω − γ_a^△ ω)|`.
    pub fn sth4_residual(&self, a: &VectorField, w: &FormField, p: &[f64]) -> Result<f64> {
        let split = self.relative.connection.nabla_form(a, w).sub(&self.gamma_adjoint(a, w));
        Ok(max_diff(&self.conn.nabla_form(a, w).at(p)?, &split.at(p)?))
    }
}

/// The frame-change operator `J(v) = β^σ(v) b'_σ` from frame A to frame B,
/// and its inverse `J'(v) = β'^σ(v) b_σ`.
#[derive(Clone)]
pub struct JacobianField {
    a: RelativeStructure,
    b: RelativeStructure,
    j: VectorOperatorField,
    j_inv: VectorOperatorField,
}

fn change_of_frame(from: &FramePair, to: &FramePair) -> VectorOperatorField {
    let (from, to) = (from.clone(), to.clone());
    VectorOperatorField::new(from.dim(), move |x| {
        let (f, t) = (from.values_at(x)?, to.values_at(x)?);
        Ok(mat_mul(&transpose(&t.vectors), &f.coframe))
    })
}

impl JacobianField {
    pub fn new(frame_a: &FramePair, frame_b: &FramePair) -> Self {
        JacobianField {
            a: RelativeStructure::new(frame_a.clone()),
            b: RelativeStructure::new(frame_b.clone()),
            j: change_of_frame(frame_a, frame_b),
            j_inv: change_of_frame(frame_b, frame_a),
        }
    }

    pub fn j(&self) -> &VectorOperatorField {
        &self.j
    }

    pub fn j_inv(&self) -> &VectorOperatorField {
        &self.j_inv
    }

    /// `max |J∘J' − 1|, |J'∘J − 1|` at `p`.
    pub fn identity_residual(&self, p: &[f64]) -> Result<f64> {
        let id = VectorOperatorField::identity(self.j.dim());
        Ok(self
            .j
            .compose(&self.j_inv)
            .distance_at(&id, p)?
            .max(self.j_inv.compose(&self.j).distance_at(&id, p)?))
    }

    /// `max_μ |J(b_μ) − b'_μ|`.
    pub fn jf3_residual(&self, p: &[f64]) -> Result<f64> {
        let (ba, bb) = (self.a.frame.vectors(), self.b.frame.vectors());
        ba.iter().zip(&bb).try_fold(0.0, |m: f64, (x, y)| {
            Ok(m.max(max_diff(&self.j.apply(x).at(p)?, &y.at(p)?)))
        })
    }

    /// `|∂'_a v − J(∂_a J⁻¹(v))|`.
    pub fn jf4_residual(&self, a: &VectorField, v: &VectorField, p: &[f64]) -> Result<f64> {
        let lhs = self.b.connection.nabla(a, v).at(p)?;
        let rhs = self.j.apply(&self.a.connection.nabla(a, &self.j_inv.apply(v))).at(p)?;
        Ok(max_diff(&lhs, &rhs))
    }

    /// `|∂'_a ω − J^{−△}(∂_a J^△(ω))|`.
    pub fn jf5_residual(&self, a: &VectorField, w: &FormField, p: &[f64]) -> Result<f64> {
        let lhs = self.b.connection.nabla_form(a, w).at(p)?;
        let rhs = self
            .j_inv
            .adjoint(&self.a.connection.nabla_form(a, &self.j.adjoint(w)))
            .at(p)?;
        Ok(max_diff(&lhs, &rhs))
    }

    /// `max_μ |J^{−△}(β^μ) − β'^μ|`.
    pub fn jf6_residual(&self, p: &[f64]) -> Result<f64> {
        let (ba, bb) = (self.a.frame.coforms(), self.b.frame.coforms());
        ba.iter().zip(&bb).try_fold(0.0, |m: f64, (x, y)| {
            Ok(m.max(max_diff(&self.j_inv.adjoint(x).at(p)?, &y.at(p)?)))
        })
    }
}

/// Largest difference between the coordinate coefficients of two
/// connections over `points`. Two relative structures are compatible on an
/// overlap when this stays within 1e-9.
pub fn compatibility_residual(a: &Connection, b: &Connection, points: &[Vec<f64>]) -> Result<f64> {
    let coord = FramePair::coordinate(a.dim());
    points.iter().try_fold(0.0, |m: f64, p| {
        Ok(m.max(max_diff(&a.coefficients_in(&coord, p)?, &b.coefficients_in(&coord, p)?)))
    })
}
