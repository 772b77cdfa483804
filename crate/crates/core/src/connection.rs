//! Connections, covariant derivatives and elementary extensor fields.

use std::sync::Arc;

use crate::chart::{derivative, Chart, FormField, PointFn, VectorField};
use crate::error::{GeomError, Result};
use crate::frame::{idx3, FramePair, FrameValues};
use crate::jet::{dot, Num, Scalar};
use crate::sample::{Sampler, SplitMix64};

/// Affine connection given by coefficients `Γ^σ_{μν}` relative to a frame,
/// with `Γ(b_μ, b_ν) = Γ^σ_{μν} b_σ`. Coefficients are flattened by
/// [`idx3`].
#[derive(Clone)]
pub struct Connection {
    frame: FramePair,
    coeffs: Arc<PointFn<Vec<Num>>>,
}

/// A vector field's frame components and their gradients at one point.
/// `along(a)` is then `∇_a v` for any direction at that point.
pub struct LocalVector {
    frame: FrameValues,
    comps: Vec<Num>,
    grad: Vec<Vec<Num>>,
    gamma: Vec<Num>,
}

/// Same as [`LocalVector`] for a form field.
pub struct LocalForm {
    frame: FrameValues,
    comps: Vec<Num>,
    grad: Vec<Vec<Num>>,
    gamma: Vec<Num>,
}

impl Connection {
    pub fn new(frame: FramePair, coeffs: impl Fn(&[Num]) -> Result<Vec<Num>> + Send + Sync + 'static) -> Self {
        Connection {
            frame,
            coeffs: Arc::new(coeffs),
        }
    }

    /// From `n³` coefficient fields in [`idx3`] order.
    pub fn from_fields(frame: FramePair, fields: Vec<crate::chart::ScalarField>) -> Result<Self> {
        let n = frame.dim();
        if fields.len() != n * n * n {
            return Err(GeomError::domain(format!(
                "a connection in dimension {n} needs {} coefficients, got {}",
                n * n * n,
                fields.len()
            )));
        }
        Ok(Connection::new(frame, move |x| {
            fields.iter().map(|f| f.eval(x)).collect()
        }))
    }

    /// All coefficients zero in the coordinate frame.
    pub fn flat(dim: usize) -> Self {
        Connection::new(FramePair::coordinate(dim), move |_| {
            Ok(vec![Num::Real(0.0); dim * dim * dim])
        })
    }

    /// Connection whose covariant derivative is `op`, with coefficients
    /// `⟨β^σ, op(b_μ, b_ν)⟩` read off in `frame`.
    pub fn from_operator(
        frame: FramePair,
        op: impl Fn(&VectorField, &VectorField) -> VectorField + Send + Sync + 'static,
    ) -> Self {
        let n = frame.dim();
        let b = frame.vectors();
        let f = frame.clone();
        Connection::new(frame, move |x| {
            let fv = f.values_at(x)?;
            let mut out = vec![Num::Real(0.0); n * n * n];
            for mu in 0..n {
                for nu in 0..n {
                    let up = fv.up(&op(&b[mu], &b[nu]).eval(x)?);
                    for (sigma, c) in up.into_iter().enumerate() {
                        out[idx3(n, sigma, mu, nu)] = c;
                    }
                }
            }
            Ok(out)
        })
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn frame(&self) -> &FramePair {
        &self.frame
    }

    pub fn coefficients(&self, x: &[Num]) -> Result<Vec<Num>> {
        let c = (self.coeffs)(x)?;
        let n = self.dim();
        if c.len() != n * n * n {
            return Err(GeomError::domain("coefficient evaluator returned the wrong count"));
        }
        Ok(c)
    }

    pub fn coefficients_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.coefficients(&Num::from_point(p))
            .map(|c| c.iter().map(Num::re).collect())
            .map_err(|e| e.at_point(p))
    }

    /// Coefficients of the same connection relative to another frame.
    pub fn coefficients_in(&self, frame: &FramePair, p: &[f64]) -> Result<Vec<f64>> {
        self.reexpress(frame.clone()).coefficients_at(p)
    }

    /// The same connection with coefficients stored relative to `frame`.
    pub fn reexpress(&self, frame: FramePair) -> Connection {
        let this = self.clone();
        Connection::from_operator(frame, move |a, v| this.nabla(a, v))
    }

    pub fn local_vector(&self, v: &VectorField, x: &[Num]) -> Result<LocalVector> {
        let n = x.len();
        let lifted = Num::lift(x);
        let fl = self.frame.values_at(&lifted)?;
        let (comps, grad) = fl.up(&v.eval(&lifted)?).into_iter().map(|c| c.unlift(n)).unzip();
        Ok(LocalVector {
            frame: fl.unlift(),
            comps,
            grad,
            gamma: self.coefficients(x)?,
        })
    }

    pub fn local_form(&self, w: &FormField, x: &[Num]) -> Result<LocalForm> {
        let n = x.len();
        let lifted = Num::lift(x);
        let fl = self.frame.values_at(&lifted)?;
        let (comps, grad) = fl.down(&w.eval(&lifted)?).into_iter().map(|c| c.unlift(n)).unzip();
        Ok(LocalForm {
            frame: fl.unlift(),
            comps,
            grad,
            gamma: self.coefficients(x)?,
        })
    }

    /// `∇_a v` as a lazily evaluated field.
    pub fn nabla(&self, a: &VectorField, v: &VectorField) -> VectorField {
        let (conn, a, v) = (self.clone(), a.clone(), v.clone());
        VectorField::new(self.dim(), move |x| Ok(conn.local_vector(&v, x)?.along(&a.eval(x)?)))
    }

    /// `∇_a ω` as a lazily evaluated field.
    pub fn nabla_form(&self, a: &VectorField, w: &FormField) -> FormField {
        let (conn, a, w) = (self.clone(), a.clone(), w.clone());
        FormField::new(self.dim(), move |x| Ok(conn.local_form(&w, x)?.along(&a.eval(x)?)))
    }
}

impl LocalVector {
    /// Coordinate components of `∇_a v` for `a` in coordinate components:
    /// `(a v^σ + a^μ v^ν Γ^σ_{μν}) b_σ`.
    pub fn along(&self, a: &[Num]) -> Vec<Num> {
        let n = self.comps.len();
        let a_frame = self.frame.up(a);
        let r: Vec<Num> = (0..n)
            .map(|sigma| {
                let mut acc = dot(a, &self.grad[sigma]);
                for (mu, am) in a_frame.iter().enumerate() {
                    for (nu, vn) in self.comps.iter().enumerate() {
                        acc = acc + am.clone() * vn.clone() * self.gamma[idx3(n, sigma, mu, nu)].clone();
                    }
                }
                acc
            })
            .collect();
        self.frame.vector_from(&r)
    }

    /// Coordinate components of v itself.
    pub fn value(&self) -> Vec<Num> {
        self.frame.vector_from(&self.comps)
    }
}

impl LocalForm {
    /// Coordinate components of `∇_a ω`:
    /// `(a ω_μ − ω_σ a^ν Γ^σ_{νμ}) β^μ`.
    pub fn along(&self, a: &[Num]) -> Vec<Num> {
        let n = self.comps.len();
        let a_frame = self.frame.up(a);
        let r: Vec<Num> = (0..n)
            .map(|mu| {
                let mut acc = dot(a, &self.grad[mu]);
                for (sigma, ws) in self.comps.iter().enumerate() {
                    for (nu, an) in a_frame.iter().enumerate() {
                        acc = acc - ws.clone() * an.clone() * self.gamma[idx3(n, sigma, nu, mu)].clone();
                    }
                }
                acc
            })
            .collect();
        self.frame.form_from(&r)
    }

    pub fn value(&self) -> Vec<Num> {
        self.frame.form_from(&self.comps)
    }
}

pub fn cov_deriv_vector(conn: &Connection, a: &VectorField, v: &VectorField) -> VectorField {
    conn.nabla(a, v)
}

pub fn cov_deriv_form(conn: &Connection, a: &VectorField, w: &FormField) -> FormField {
    conn.nabla_form(a, w)
}

/// Anything that maps a direction and a vector field to a vector field.
/// Lets the axiom checker run on maps that are not connections at all.
pub trait AffineConnection: Send + Sync {
    fn dim(&self) -> usize;
    fn apply(&self, a: &VectorField, v: &VectorField) -> VectorField;
}

impl AffineConnection for Connection {
    fn dim(&self) -> usize {
        Connection::dim(self)
    }

    fn apply(&self, a: &VectorField, v: &VectorField) -> VectorField {
        self.nabla(a, v)
    }
}

/// Value of an extensor field: a vector field or a form field.
#[derive(Clone)]
pub enum ExtensorValue {
    Vector(VectorField),
    Form(FormField),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputKind {
    Vector,
    Form,
}

type ExtensorFn = dyn Fn(&[VectorField], &[FormField]) -> ExtensorValue + Send + Sync;

/// Multilinear field taking `covariant` vector arguments and `contravariant`
/// form arguments, with vector or form output. Arguments are whole fields so
/// that the result can be differentiated again.
#[derive(Clone)]
pub struct ExtensorField {
    covariant: usize,
    contravariant: usize,
    output: OutputKind,
    eval: Arc<ExtensorFn>,
}

impl ExtensorField {
    pub fn new(
        covariant: usize,
        contravariant: usize,
        output: OutputKind,
        eval: impl Fn(&[VectorField], &[FormField]) -> ExtensorValue + Send + Sync + 'static,
    ) -> Self {
        ExtensorField {
            covariant,
            contravariant,
            output,
            eval: Arc::new(eval),
        }
    }

    /// The (1,0) identity `τ(v) = v`.
    pub fn identity() -> Self {
        ExtensorField::new(1, 0, OutputKind::Vector, |v, _| ExtensorValue::Vector(v[0].clone()))
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.covariant, self.contravariant)
    }

    pub fn output(&self) -> OutputKind {
        self.output
    }

    pub fn apply(&self, vs: &[VectorField], ws: &[FormField]) -> Result<ExtensorValue> {
        if vs.len() != self.covariant || ws.len() != self.contravariant {
            return Err(GeomError::domain(format!(
                "extensor of arity ({}, {}) applied to {} vectors and {} forms",
                self.covariant,
                self.contravariant,
                vs.len(),
                ws.len()
            )));
        }
        Ok((self.eval)(vs, ws))
    }

    pub fn apply_vector(&self, vs: &[VectorField], ws: &[FormField]) -> Result<VectorField> {
        match self.apply(vs, ws)? {
            ExtensorValue::Vector(v) => Ok(v),
            ExtensorValue::Form(_) => Err(GeomError::domain("extensor is form valued")),
        }
    }

    pub fn apply_form(&self, vs: &[VectorField], ws: &[FormField]) -> Result<FormField> {
        match self.apply(vs, ws)? {
            ExtensorValue::Form(w) => Ok(w),
            ExtensorValue::Vector(_) => Err(GeomError::domain("extensor is vector valued")),
        }
    }
}

fn difference(lhs: ExtensorValue, rhs: ExtensorValue) -> ExtensorValue {
    match (lhs, rhs) {
        (ExtensorValue::Vector(a), ExtensorValue::Vector(b)) => ExtensorValue::Vector(a.sub(&b)),
        (ExtensorValue::Form(a), ExtensorValue::Form(b)) => ExtensorValue::Form(a.sub(&b)),
        _ => unreachable!("an extensor has a single output kind"),
    }
}

/// `(∇_a τ)(v…, ω…) = ∇_a(τ(v…, ω…)) − Σ τ(…, ∇_a vᵢ, …) − Σ τ(…, ∇_a ωʲ, …)`.
pub fn cov_deriv_extensor(conn: &Connection, a: &VectorField, tau: &ExtensorField) -> ExtensorField {
    let (conn, a, inner) = (conn.clone(), a.clone(), tau.clone());
    let (k, l) = tau.arity();
    ExtensorField::new(k, l, tau.output(), move |vs, ws| {
        let mut acc = match (inner.eval)(vs, ws) {
            ExtensorValue::Vector(v) => ExtensorValue::Vector(conn.nabla(&a, &v)),
            ExtensorValue::Form(w) => ExtensorValue::Form(conn.nabla_form(&a, &w)),
        };
        for i in 0..vs.len() {
            let mut args = vs.to_vec();
            args[i] = conn.nabla(&a, &vs[i]);
            acc = difference(acc, (inner.eval)(&args, ws));
        }
        for j in 0..ws.len() {
            let mut args = ws.to_vec();
            args[j] = conn.nabla_form(&a, &ws[j]);
            acc = difference(acc, (inner.eval)(vs, &args));
        }
        acc
    })
}

/// Largest residuals of the two connection axioms over random samples.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    /// `Γ(fa+gb, v) − fΓ(a,v) − gΓ(b,v)`
    pub strong_linearity: f64,
    /// `Γ(a, fv+gw) − (af)v − (ag)w − fΓ(a,v) − gΓ(a,w)`
    pub quasi_linearity: f64,
    pub samples: usize,
    pub worst_point: Vec<f64>,
}

fn max_abs(v: &[Num]) -> f64 {
    v.iter().map(|x| x.re().abs()).fold(0.0, f64::max)
}

/// Both axiom residuals at one random sample drawn from `s`.
pub fn axiom_residuals(conn: &dyn AffineConnection, s: &mut Sampler) -> Result<(f64, f64, Vec<f64>)> {
    let (f, g) = (s.scalar_field(), s.scalar_field());
    let (a, b) = (s.vector_field(), s.vector_field());
    let (v, w) = (s.vector_field(), s.vector_field());
    let p = s.point();
    let x = Num::from_point(&p);
    let at = |field: &VectorField| field.eval(&x).map_err(|e| e.at_point(&p));

    let fa_gb = a.scale(&f).add(&b.scale(&g));
    let lhs = at(&conn.apply(&fa_gb, &v))?;
    let rhs = at(&conn.apply(&a, &v).scale(&f).add(&conn.apply(&b, &v).scale(&g)))?;
    let strong: Vec<Num> = lhs.into_iter().zip(rhs).map(|(l, r)| l - r).collect();

    let fv_gw = v.scale(&f).add(&w.scale(&g));
    let lhs = at(&conn.apply(&a, &fv_gw))?;
    let rhs = at(&v
        .scale(&derivative(&a, &f))
        .add(&w.scale(&derivative(&a, &g)))
        .add(&conn.apply(&a, &v).scale(&f))
        .add(&conn.apply(&a, &w).scale(&g)))?;
    let quasi: Vec<Num> = lhs.into_iter().zip(rhs).map(|(l, r)| l - r).collect();

    Ok((max_abs(&strong), max_abs(&quasi), p))
}

/// Runs [`axiom_residuals`] on `samples` independent substreams of `seed`.
pub fn check_connection_axioms(
    conn: &dyn AffineConnection,
    chart: &Chart,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        strong_linearity: 0.0,
        quasi_linearity: 0.0,
        samples,
        worst_point: Vec::new(),
    };
    let mut worst = -1.0;
    for i in 0..samples {
        let mut s = Sampler::new(chart, SplitMix64::substream(seed, 0, i as u32));
        let (strong, quasi, p) = axiom_residuals(conn, &mut s)?;
        report.strong_linearity = report.strong_linearity.max(strong);
        report.quasi_linearity = report.quasi_linearity.max(quasi);
        if strong.max(quasi) > worst {
            worst = strong.max(quasi);
            report.worst_point = p;
        }
    }
    Ok(report)
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
    fn flat_derivative_of_basis_vanishes() {
        let g = Connection::flat(2);
        let v = g.nabla(&VectorField::basis(2, 0), &VectorField::basis(2, 1));
        assert_eq!(v.at(&[0.3, 0.4]).unwrap(), vec![0.0, 0.0]);
        let w = g.nabla_form(&VectorField::basis(2, 0), &FormField::basis(2, 1));
        assert_eq!(w.at(&[0.3, 0.4]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn sphere_nabla_phi_phi() {
        let g = sphere();
        let e_ph = VectorField::basis(2, 1);
        let v = g.nabla(&e_ph, &e_ph).at(&[FRAC_PI_3, 1.0]).unwrap();
        assert_abs_diff_eq!(v[0], -(3f64.sqrt()) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-15);
        let w = g
            .nabla_form(&e_ph, &FormField::basis(2, 0))
            .at(&[FRAC_PI_3, 1.0])
            .unwrap();
        assert_abs_diff_eq!(w[1], 3f64.sqrt() / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_extensor_has_zero_derivative() {
        let g = sphere();
        let chart = Chart::new(vec!["th", "ph"], vec![(0.3, 2.8), (0.0, 6.0)]).unwrap();
        let mut s = Sampler::new(&chart, SplitMix64::new(3));
        let (a, v) = (s.vector_field(), s.vector_field());
        let d = cov_deriv_extensor(&g, &a, &ExtensorField::identity());
        let out = d.apply_vector(&[v], &[]).unwrap().at(&s.point()).unwrap();
        assert!(out.iter().all(|c| c.abs() < 1e-12), "{out:?}");
        assert!(d.apply(&[], &[]).is_err());
    }

    #[test]
    fn reexpressed_coefficients_agree() {
        let g = sphere();
        let chart = Chart::new(vec!["th", "ph"], vec![(0.3, 2.8), (0.0, 6.0)]).unwrap();
        let mut s = Sampler::new(&chart, SplitMix64::new(11));
        let other = g.reexpress(s.frame().unwrap());
        let (a, v) = (s.vector_field(), s.vector_field());
        let p = s.point();
        let x = g.nabla(&a, &v).at(&p).unwrap();
        let y = other.nabla(&a, &v).at(&p).unwrap();
        for (x, y) in x.iter().zip(&y) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
        let back = other.coefficients_in(&FramePair::coordinate(2), &p).unwrap();
        let orig = g.coefficients_at(&p).unwrap();
        for (x, y) in back.iter().zip(&orig) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
    }

    struct Corrupted(Connection);

    impl AffineConnection for Corrupted {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn apply(&self, a: &VectorField, v: &VectorField) -> VectorField {
            let norm = {
                let v = v.clone();
                ScalarField::new(move |x| {
                    let c = v.eval(x)?;
                    Ok(dot(&c, &c).sqrt())
                })
            };
            self.0.apply(a, v).add(&VectorField::basis(self.dim(), 0).scale(&norm))
        }
    }

    #[test]
    fn axiom_checker_passes_connections_and_catches_corruption() {
        let chart = Chart::new(vec!["th", "ph"], vec![(0.3, 2.8), (0.0, 6.0)]).unwrap();
        let ok = check_connection_axioms(&sphere(), &chart, 10, 5).unwrap();
        assert!(ok.strong_linearity <= 1e-10 && ok.quasi_linearity <= 1e-10, "{ok:?}");
        let bad = check_connection_axioms(&Corrupted(sphere()), &chart, 10, 5).unwrap();
        assert!(bad.quasi_linearity > 1e-3, "{bad:?}");
    }
}
