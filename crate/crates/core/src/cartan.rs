//! Plus and minus Cartan connections, the torsion and curvature families and
//! the two structure equations.
//!
//! Every operation takes the connection and an *active* frame pair
//! `{e_μ, ε^μ}` over which the frame sums run. The connection's own frame
//! is the natural choice, but any frame must give the same values; that is
//! what the frame-independence checks exercise. Pointwise results are
//! returned in coordinate components.

use crate::chart::{exterior_derivative_1form, lie_bracket, FormField, VectorField};
use crate::connection::{Connection, ExtensorField, ExtensorValue, OutputKind};
use crate::error::Result;
use crate::exterior::{pair, KForm, KVector};
use crate::frame::{idx3, FramePair, FrameValues};
use crate::jet::{dot, Num, Scalar};

fn reals(v: &[Num]) -> Vec<f64> {
    v.iter().map(Num::re).collect()
}

fn frame_at(frame: &FramePair, p: &[f64]) -> Result<FrameValues> {
    frame.values_at(&Num::from_point(p)).map_err(|e| e.at_point(p))
}

/// `a ∧ b` for two 1-forms given by coordinate components.
pub fn wedge1(a: &[f64], b: &[f64]) -> Result<KForm> {
    KForm::grade_one(a).wedge(&KForm::grade_one(b))
}

/// `a ∧ b` for two vectors given by coordinate components.
pub fn bivector(a: &[f64], b: &[f64]) -> Result<KVector> {
    KVector::grade_one(a).wedge(&KVector::grade_one(b))
}

/// `½ Σ c(μ,ν) ε^μ∧ε^ν` for antisymmetric `c`, in coordinate components.
fn biform_from(fv: &FrameValues, c: impl Fn(usize, usize) -> Result<f64>) -> Result<KForm> {
    let n = fv.coframe.len();
    let mut out = KForm::zero(n, 2)?;
    for mu in 0..n {
        for nu in mu + 1..n {
            let k = c(mu, nu)?;
            if k != 0.0 {
                let w = wedge1(&reals(&fv.coframe[mu]), &reals(&fv.coframe[nu]))?;
                out = out.try_add(&w.scale(k))?;
            }
        }
    }
    Ok(out)
}

/// `Γ⁺(v, ω) = ⟨ω, ∇_{e_σ} v⟩ ε^σ`.
pub fn gamma_plus(conn: &Connection, frame: &FramePair, v: &VectorField, w: &FormField) -> FormField {
    let (conn, frame, v, w) = (conn.clone(), frame.clone(), v.clone(), w.clone());
    FormField::new(conn.dim(), move |x| {
        let lv = conn.local_vector(&v, x)?;
        let fv = frame.values_at(x)?;
        let wv = w.eval(x)?;
        let c: Vec<Num> = fv.vectors.iter().map(|e| dot(&wv, &lv.along(e))).collect();
        Ok(fv.form_from(&c))
    })
}

/// `Γ⁻(v, ω) = ⟨∇_{e_σ} ω, v⟩ ε^σ`.
pub fn gamma_minus(conn: &Connection, frame: &FramePair, v: &VectorField, w: &FormField) -> FormField {
    let (conn, frame, v, w) = (conn.clone(), frame.clone(), v.clone(), w.clone());
    FormField::new(conn.dim(), move |x| {
        let lw = conn.local_form(&w, x)?;
        let fv = frame.values_at(x)?;
        let vv = v.eval(x)?;
        let c: Vec<Num> = fv.vectors.iter().map(|e| dot(&lw.along(e), &vv)).collect();
        Ok(fv.form_from(&c))
    })
}

/// Connection forms `γ^ν_μ = Γ⁺(e_μ, ε^ν)`, indexed `[ν][μ]`.
pub fn connection_forms(conn: &Connection, frame: &FramePair) -> Vec<Vec<FormField>> {
    let (e, eps) = (frame.vectors(), frame.coforms());
    eps.iter()
        .map(|eps_nu| e.iter().map(|e_mu| gamma_plus(conn, frame, e_mu, eps_nu)).collect())
        .collect()
}

/// τ, 𝒯, T and Θ of a connection, with frame sums over `frame`.
#[derive(Clone)]
pub struct TorsionFamily {
    conn: Connection,
    frame: FramePair,
}

impl TorsionFamily {
    pub fn new(conn: &Connection, frame: &FramePair) -> Self {
        TorsionFamily {
            conn: conn.clone(),
            frame: frame.clone(),
        }
    }

    /// `τ(a,b) = ∇_a b − ∇_b a − [a,b]`.
    pub fn tau(&self, a: &VectorField, b: &VectorField) -> VectorField {
        self.conn
            .nabla(a, b)
            .sub(&self.conn.nabla(b, a))
            .sub(&lie_bracket(a, b))
    }

    pub fn tau_at(&self, a: &VectorField, b: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        self.tau(a, b).at(p)
    }

    fn tau_frame(&self, mu: usize, nu: usize, p: &[f64]) -> Result<Vec<f64>> {
        self.tau_at(&self.frame.vector(mu), &self.frame.vector(nu), p)
    }

    /// `𝒯(X²) = ½ ⟨ε^μ∧ε^ν, X²⟩ τ(e_μ, e_ν)`.
    pub fn t_ext(&self, x2: &KVector, p: &[f64]) -> Result<Vec<f64>> {
        let fv = frame_at(&self.frame, p)?;
        let n = self.conn.dim();
        let mut out = vec![0.0; n];
        for mu in 0..n {
            for nu in mu + 1..n {
                let k = pair(&wedge1(&reals(&fv.coframe[mu]), &reals(&fv.coframe[nu]))?, x2)?;
                for (o, t) in out.iter_mut().zip(self.tau_frame(mu, nu, p)?) {
                    *o += k * t;
                }
            }
        }
        Ok(out)
    }

    /// `T(a, b, ω) = ⟨ω, τ(a,b)⟩`.
    pub fn t_tensor(&self, a: &VectorField, b: &VectorField, w: &FormField, p: &[f64]) -> Result<f64> {
        Ok(dot(&w.at(p)?, &self.tau_at(a, b, p)?))
    }

    /// Components `T^ν_{αβ} = T(e_α, e_β, ε^ν)`, flattened by [`idx3`].
    pub fn components(&self, p: &[f64]) -> Result<Vec<f64>> {
        let fv = frame_at(&self.frame, p)?;
        let n = self.conn.dim();
        let mut out = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let t = self.tau_frame(a, b, p)?;
                for nu in 0..n {
                    out[idx3(n, nu, a, b)] = dot(&reals(&fv.coframe[nu]), &t);
                }
            }
        }
        Ok(out)
    }

    /// `Θ(ω) = ½ ⟨ω, τ(e_μ, e_ν)⟩ ε^μ∧ε^ν`.
    pub fn theta(&self, w: &FormField, p: &[f64]) -> Result<KForm> {
        let fv = frame_at(&self.frame, p)?;
        let wv = w.at(p)?;
        biform_from(&fv, |mu, nu| Ok(dot(&wv, &self.tau_frame(mu, nu, p)?)))
    }

    /// `dε^ν + γ^ν_σ ∧ ε^σ`, the frame form of the first structure equation.
    pub fn theta_frame(&self, nu: usize, p: &[f64]) -> Result<KForm> {
        let fv = frame_at(&self.frame, p)?;
        let mut out = exterior_derivative_1form(&self.frame.coform(nu), p)?;
        for (sigma, e) in self.frame.vectors().iter().enumerate() {
            let gamma = gamma_plus(&self.conn, &self.frame, e, &self.frame.coform(nu)).at(p)?;
            out = out.try_add(&wedge1(&gamma, &reals(&fv.coframe[sigma]))?)?;
        }
        Ok(out)
    }

    /// `τ(a,b)` rebuilt as `T(a, b, ε^μ) e_μ`.
    pub fn reconstruct_tau(&self, a: &VectorField, b: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        let fv = frame_at(&self.frame, p)?;
        let n = self.conn.dim();
        let mut out = vec![0.0; n];
        for (mu, e) in fv.vectors.iter().enumerate() {
            let t = self.t_tensor(a, b, &self.frame.coform(mu), p)?;
            for (o, ei) in out.iter_mut().zip(e) {
                *o += t * ei.re();
            }
        }
        Ok(out)
    }
}

/// ρ, ℛ, R and Ω of a connection, with frame sums over `frame`.
#[derive(Clone)]
pub struct CurvatureFamily {
    conn: Connection,
    frame: FramePair,
}

impl CurvatureFamily {
    pub fn new(conn: &Connection, frame: &FramePair) -> Self {
        CurvatureFamily {
            conn: conn.clone(),
            frame: frame.clone(),
        }
    }

    /// `ρ(a,b,c) = ∇_a∇_b c − ∇_b∇_a c − ∇_{[a,b]} c`.
    pub fn rho(&self, a: &VectorField, b: &VectorField, c: &VectorField) -> VectorField {
        let g = &self.conn;
        g.nabla(a, &g.nabla(b, c))
            .sub(&g.nabla(b, &g.nabla(a, c)))
            .sub(&g.nabla(&lie_bracket(a, b), c))
    }

    pub fn rho_at(&self, a: &VectorField, b: &VectorField, c: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        self.rho(a, b, c).at(p)
    }

    /// ρ as a (3,0) vector-valued extensor field.
    pub fn extensor(&self) -> ExtensorField {
        let this = self.clone();
        ExtensorField::new(3, 0, OutputKind::Vector, move |v, _| {
            ExtensorValue::Vector(this.rho(&v[0], &v[1], &v[2]))
        })
    }

    fn rho_frame(&self, mu: usize, nu: usize, c: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        self.rho_at(&self.frame.vector(mu), &self.frame.vector(nu), c, p)
    }

    /// `ℛ(X², c) = ½ ⟨ε^μ∧ε^ν, X²⟩ ρ(e_μ, e_ν, c)`.
    pub fn r_ext(&self, x2: &KVector, c: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        let fv = frame_at(&self.frame, p)?;
        let n = self.conn.dim();
        let mut out = vec![0.0; n];
        for mu in 0..n {
            for nu in mu + 1..n {
                let k = pair(&wedge1(&reals(&fv.coframe[mu]), &reals(&fv.coframe[nu]))?, x2)?;
                for (o, r) in out.iter_mut().zip(self.rho_frame(mu, nu, c, p)?) {
                    *o += k * r;
                }
            }
        }
        Ok(out)
    }

    /// `R(a, b, c, ω) = ⟨ω, ρ(b, c, a)⟩`. Note the rotation: the first
    /// argument of R is the *last* argument of ρ.
    pub fn r_tensor(&self, a: &VectorField, b: &VectorField, c: &VectorField, w: &FormField, p: &[f64]) -> Result<f64> {
        Ok(dot(&w.at(p)?, &self.rho_at(b, c, a, p)?))
    }

    /// `Ω(c, ω) = ½ ⟨ω, ρ(e_μ, e_ν, c)⟩ ε^μ∧ε^ν`.
    pub fn omega(&self, c: &VectorField, w: &FormField, p: &[f64]) -> Result<KForm> {
        let fv = frame_at(&self.frame, p)?;
        let wv = w.at(p)?;
        biform_from(&fv, |mu, nu| Ok(dot(&wv, &self.rho_frame(mu, nu, c, p)?)))
    }

    /// `dγ^ν_μ + γ^ν_σ ∧ γ^σ_μ`, the frame form of the second structure
    /// equation; equals `Ω(e_μ, ε^ν)`.
    pub fn omega_frame(&self, nu: usize, mu: usize, p: &[f64]) -> Result<KForm> {
        let gamma = connection_forms(&self.conn, &self.frame);
        let mut out = exterior_derivative_1form(&gamma[nu][mu], p)?;
        for sigma in 0..self.conn.dim() {
            let l = gamma[nu][sigma].at(p)?;
            let r = gamma[sigma][mu].at(p)?;
            out = out.try_add(&wedge1(&l, &r)?)?;
        }
        Ok(out)
    }

    /// `ρ(a,b,c)` rebuilt as `R(c, a, b, ε^μ) e_μ`.
    pub fn reconstruct_rho(&self, a: &VectorField, b: &VectorField, c: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
        let fv = frame_at(&self.frame, p)?;
        let mut out = vec![0.0; self.conn.dim()];
        for (mu, e) in fv.vectors.iter().enumerate() {
            let r = self.r_tensor(c, a, b, &self.frame.coform(mu), p)?;
            for (o, ei) in out.iter_mut().zip(e) {
                *o += r * ei.re();
            }
        }
        Ok(out)
    }
}

/// `Σ_σ Γ⁻(e_σ, ω) ∧ ε^σ`.
pub fn covariant_curl(conn: &Connection, frame: &FramePair, w: &FormField, p: &[f64]) -> Result<KForm> {
    let fv = frame_at(frame, p)?;
    let mut out = KForm::zero(conn.dim(), 2)?;
    for (sigma, e) in frame.vectors().iter().enumerate() {
        let g = gamma_minus(conn, frame, e, w).at(p)?;
        out = out.try_add(&wedge1(&g, &reals(&fv.coframe[sigma]))?)?;
    }
    Ok(out)
}

/// `Σ_μ ε^μ ∧ ∇_{e_μ} ω`, the second route to the covariant curl.
pub fn covariant_curl_direct(conn: &Connection, frame: &FramePair, w: &FormField, p: &[f64]) -> Result<KForm> {
    let fv = frame_at(frame, p)?;
    let mut out = KForm::zero(conn.dim(), 2)?;
    for (mu, e) in frame.vectors().iter().enumerate() {
        let d = conn.nabla_form(e, w).at(p)?;
        out = out.try_add(&wedge1(&reals(&fv.coframe[mu]), &d)?)?;
    }
    Ok(out)
}

/// `(Θ(ω), dω − Γ⁻(e_σ, ω)∧ε^σ)`.
pub fn cartan_first_sides(conn: &Connection, frame: &FramePair, w: &FormField, p: &[f64]) -> Result<(KForm, KForm)> {
    let lhs = TorsionFamily::new(conn, frame).theta(w, p)?;
    let rhs = exterior_derivative_1form(w, p)?.try_sub(&covariant_curl(conn, frame, w, p)?)?;
    Ok((lhs, rhs))
}

pub fn cartan_first_residual(conn: &Connection, frame: &FramePair, w: &FormField, p: &[f64]) -> Result<KForm> {
    let (lhs, rhs) = cartan_first_sides(conn, frame, w, p)?;
    lhs.try_sub(&rhs)
}

/// `Σ_σ Γ⁺(c, ε^σ) ∧ Γ⁻(e_σ, ω)`.
pub fn cartan_second_wedge_term(
    conn: &Connection,
    frame: &FramePair,
    c: &VectorField,
    w: &FormField,
    p: &[f64],
) -> Result<KForm> {
    let mut out = KForm::zero(conn.dim(), 2)?;
    for (e, eps) in frame.vectors().iter().zip(frame.coforms()) {
        let l = gamma_plus(conn, frame, c, &eps).at(p)?;
        let r = gamma_minus(conn, frame, e, w).at(p)?;
        out = out.try_add(&wedge1(&l, &r)?)?;
    }
    Ok(out)
}

/// The same term computed as `⟨∇_{e_ν} ω, ∇_{e_μ} c⟩ ε^μ∧ε^ν`.
pub fn cartan_second_pairing_term(
    conn: &Connection,
    frame: &FramePair,
    c: &VectorField,
    w: &FormField,
    p: &[f64],
) -> Result<KForm> {
    let fv = frame_at(frame, p)?;
    let e = frame.vectors();
    let dw: Vec<Vec<f64>> = e.iter().map(|e| conn.nabla_form(e, w).at(p)).collect::<Result<_>>()?;
    let dc: Vec<Vec<f64>> = e.iter().map(|e| conn.nabla(e, c).at(p)).collect::<Result<_>>()?;
    biform_from(&fv, |mu, nu| Ok(dot(&dw[nu], &dc[mu]) - dot(&dw[mu], &dc[nu])))
}

/// `(Ω(c, ω), dΓ⁺(c, ω) + Γ⁺(c, ε^σ)∧Γ⁻(e_σ, ω))`.
pub fn cartan_second_sides(
    conn: &Connection,
    frame: &FramePair,
    c: &VectorField,
    w: &FormField,
    p: &[f64],
) -> Result<(KForm, KForm)> {
    let lhs = CurvatureFamily::new(conn, frame).omega(c, w, p)?;
    let rhs = exterior_derivative_1form(&gamma_plus(conn, frame, c, w), p)?
        .try_add(&cartan_second_wedge_term(conn, frame, c, w, p)?)?;
    Ok((lhs, rhs))
}

pub fn cartan_second_residual(
    conn: &Connection,
    frame: &FramePair,
    c: &VectorField,
    w: &FormField,
    p: &[f64],
) -> Result<KForm> {
    let (lhs, rhs) = cartan_second_sides(conn, frame, c, w, p)?;
    lhs.try_sub(&rhs)
}

/// `|⟨ω, 𝒯(X²)⟩ − ⟨Θ(ω), X²⟩|`.
pub fn torsion_duality_residual(
    conn: &Connection,
    frame: &FramePair,
    w: &FormField,
    x2: &KVector,
    p: &[f64],
) -> Result<f64> {
    let t = TorsionFamily::new(conn, frame);
    let lhs = dot(&w.at(p)?, &t.t_ext(x2, p)?);
    let rhs = pair(&t.theta(w, p)?, x2)?;
    Ok((lhs - rhs).abs())
}

/// `|⟨ω, ℛ_c(X²)⟩ − ⟨Ω_c(ω), X²⟩|`.
pub fn curvature_duality_residual(
    conn: &Connection,
    frame: &FramePair,
    c: &VectorField,
    w: &FormField,
    x2: &KVector,
    p: &[f64],
) -> Result<f64> {
    let r = CurvatureFamily::new(conn, frame);
    let lhs = dot(&w.at(p)?, &r.r_ext(x2, c, p)?);
    let rhs = pair(&r.omega(c, w, p)?, x2)?;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ScalarField;
    use crate::expr::compile;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_3;

    fn sphere() -> Connection {
        let names = ["th", "ph"];
        let c = |s: &str| ScalarField::from_expr(compile(s, &names).unwrap());
        let mut fields: Vec<ScalarField> = (0..8).map(|_| ScalarField::constant(0.0)).collect();
        fields[idx3(2, 0, 1, 1)] = c("-sin(th)*cos(th)");
        fields[idx3(2, 1, 0, 1)] = c("cos(th)/sin(th)");
        fields[idx3(2, 1, 1, 0)] = c("cos(th)/sin(th)");
        Connection::from_fields(FramePair::coordinate(2), fields).unwrap()
    }

    #[test]
    fn sphere_gamma_plus_and_minus() {
        let g = sphere();
        let f = FramePair::coordinate(2);
        let (e_ph, d_th) = (VectorField::basis(2, 1), FormField::basis(2, 0));
        let p = [FRAC_PI_3, 1.0];
        let plus = gamma_plus(&g, &f, &e_ph, &d_th).at(&p).unwrap();
        let minus = gamma_minus(&g, &f, &e_ph, &d_th).at(&p).unwrap();
        let s = 3f64.sqrt() / 4.0;
        assert_abs_diff_eq!(plus[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(plus[1], -s, epsilon = 1e-15);
        assert_abs_diff_eq!(minus[1], s, epsilon = 1e-15);
    }

    #[test]
    fn sphere_curvature_value() {
        let g = sphere();
        let r = CurvatureFamily::new(&g, &FramePair::coordinate(2));
        let (e_th, e_ph) = (VectorField::basis(2, 0), VectorField::basis(2, 1));
        let v = r.rho_at(&e_th, &e_ph, &e_ph, &[FRAC_PI_3, 1.0]).unwrap();
        assert_abs_diff_eq!(v[0], 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-14);
        let om = r.omega(&e_ph, &FormField::basis(2, 0), &[FRAC_PI_3, 1.0]).unwrap();
        assert_abs_diff_eq!(om.components()[0], 0.75, epsilon = 1e-14);
    }

    #[test]
    fn sphere_second_equation_and_frame_form() {
        let g = sphere();
        let f = FramePair::coordinate(2);
        let (e_ph, d_th) = (VectorField::basis(2, 1), FormField::basis(2, 0));
        let p = [FRAC_PI_3, 1.0];
        assert!(cartan_second_residual(&g, &f, &e_ph, &d_th, &p).unwrap().max_abs() < 1e-13);
        let r = CurvatureFamily::new(&g, &f);
        let frame_form = r.omega_frame(0, 1, &p).unwrap();
        assert_abs_diff_eq!(frame_form.components()[0], 0.75, epsilon = 1e-14);
        let a = cartan_second_wedge_term(&g, &f, &e_ph, &d_th, &p).unwrap();
        let b = cartan_second_pairing_term(&g, &f, &e_ph, &d_th, &p).unwrap();
        assert!(a.try_sub(&b).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn connection_forms_of_sphere() {
        let g = sphere();
        let gamma = connection_forms(&g, &FramePair::coordinate(2));
        let th = 0.9_f64;
        let v = gamma[0][1].at(&[th, 0.0]).unwrap();
        assert_abs_diff_eq!(v[1], -th.sin() * th.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-15);
    }
}
