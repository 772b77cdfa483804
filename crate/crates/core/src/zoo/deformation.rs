use crate::chart::{Chart, FormField, VectorField};
use crate::connection::Connection;
use crate::error::Result;
use crate::frame::FramePair;
use crate::zoo::{max_diff, VectorOperatorField};

/// An invertible operator field λ together with its inverse.
#[derive(Clone)]
pub struct Deformation {
    lambda: VectorOperatorField,
    lambda_inv: VectorOperatorField,
}

impl Deformation {
    /// Fails with a singularity error naming the first grid point where
    /// `|det λ| ≤ 1e-8`.
    pub fn new(chart: &Chart, lambda: VectorOperatorField) -> Result<Self> {
        lambda.validate_invertible(chart)?;
        let lambda_inv = lambda.inverse();
        Ok(Deformation { lambda, lambda_inv })
    }

    pub fn lambda(&self) -> &VectorOperatorField {
        &self.lambda
    }

    pub fn lambda_inv(&self) -> &VectorOperatorField {
        &self.lambda_inv
    }

    /// `λ^△`.
    pub fn lambda_adj(&self, w: &FormField) -> FormField {
        self.lambda.adjoint(w)
    }

    /// `λ^{−△} = (λ⁻¹)^△`.
    pub fn lambda_adj_inv(&self, w: &FormField) -> FormField {
        self.lambda_inv.adjoint(w)
    }

    /// `max |λ∘λ⁻¹ − 1|` at `p`.
    pub fn inverse_residual(&self, p: &[f64]) -> Result<f64> {
        let id = VectorOperatorField::identity(self.lambda.dim());
        self.lambda.compose(&self.lambda_inv).distance_at(&id, p)
    }

    /// `|⟨λ^△(ω), v⟩ − ⟨ω, λ(v)⟩|` at `p`.
    pub fn adjoint_residual(&self, w: &FormField, v: &VectorField, p: &[f64]) -> Result<f64> {
        let lhs: f64 = self.lambda_adj(w).at(p)?.iter().zip(v.at(p)?).map(|(a, b)| a * b).sum();
        let rhs: f64 = w
            .at(p)?
            .iter()
            .zip(self.lambda.apply(v).at(p)?)
            .map(|(a, b)| a * b)
            .sum();
        Ok((lhs - rhs).abs())
    }

    /// `|∇̂_a v − λ(∇_a λ⁻¹(v))|` where ∇̂ is `deformed`.
    pub fn dps2_residual(
        &self,
        conn: &Connection,
        deformed: &Connection,
        a: &VectorField,
        v: &VectorField,
        p: &[f64],
    ) -> Result<f64> {
        let lhs = deformed.nabla(a, v).at(p)?;
        let rhs = self.lambda.apply(&conn.nabla(a, &self.lambda_inv.apply(v))).at(p)?;
        Ok(max_diff(&lhs, &rhs))
    }

    /// `|∇̂_a ω − λ^{−△}(∇_a λ^△(ω))|`.
    pub fn dps4_residual(
        &self,
        conn: &Connection,
        deformed: &Connection,
        a: &VectorField,
        w: &FormField,
        p: &[f64],
    ) -> Result<f64> {
        let lhs = deformed.nabla_form(a, w).at(p)?;
        let rhs = self.lambda_adj_inv(&conn.nabla_form(a, &self.lambda_adj(w))).at(p)?;
        Ok(max_diff(&lhs, &rhs))
    }
}

/// The λ-deformation `Γ^λ(a, v) = λ(Γ(a, λ⁻¹(v)))`, with coefficients
/// stored in the coordinate frame.
pub fn deform(conn: &Connection, d: &Deformation) -> Connection {
    let (g, d) = (conn.clone(), d.clone());
    Connection::from_operator(FramePair::coordinate(conn.dim()), move |a, v| {
        d.lambda.apply(&g.nabla(a, &d.lambda_inv.apply(v)))
    })
}
