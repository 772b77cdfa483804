use crate::cartan::{CurvatureFamily, TorsionFamily};
use crate::chart::{Chart, VectorField};
use crate::connection::{cov_deriv_extensor, Connection};
use crate::error::Result;
use crate::sample::{Sampler, SplitMix64};
use crate::zoo::max_abs;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    /// `max |τ(a,b)|` over the samples.
    pub torsion: f64,
    /// `max |Θ(ω)|`, the cross-check.
    pub theta: f64,
    pub worst_point: Vec<f64>,
}

/// Samples `|τ(a,b)|` and `|Θ(ω)|` for random arguments; symmetric when both
/// stay within `tol`.
pub fn is_symmetric(conn: &Connection, chart: &Chart, samples: usize, seed: u64, tol: f64) -> Result<SymmetryReport> {
    let t = TorsionFamily::new(conn, conn.frame());
    let mut report = SymmetryReport {
        symmetric: true,
        torsion: 0.0,
        theta: 0.0,
        worst_point: Vec::new(),
    };
    let mut worst = -1.0;
    for i in 0..samples {
        let mut s = Sampler::new(chart, SplitMix64::substream(seed, 0, i as u32));
        let (a, b, w) = (s.vector_field(), s.vector_field(), s.form_field());
        let p = s.point();
        let tau = max_abs(&t.tau_at(&a, &b, &p)?);
        let theta = t.theta(&w, &p)?.max_abs();
        report.torsion = report.torsion.max(tau);
        report.theta = report.theta.max(theta);
        if tau.max(theta) > worst {
            worst = tau.max(theta);
            report.worst_point = p;
        }
    }
    report.symmetric = report.torsion <= tol && report.theta <= tol;
    Ok(report)
}

/// `ρ(a,b,c) + ρ(b,c,a) + ρ(c,a,b)`.
pub fn cyclic_residual(
    conn: &Connection,
    a: &VectorField,
    b: &VectorField,
    c: &VectorField,
    p: &[f64],
) -> Result<Vec<f64>> {
    let r = CurvatureFamily::new(conn, conn.frame());
    r.rho(a, b, c).add(&r.rho(b, c, a)).add(&r.rho(c, a, b)).at(p)
}

/// `(∇_w ρ)(a,b,c) + (∇_a ρ)(b,w,c) + (∇_b ρ)(w,a,c)`.
pub fn bianchi_residual(
    conn: &Connection,
    w: &VectorField,
    a: &VectorField,
    b: &VectorField,
    c: &VectorField,
    p: &[f64],
) -> Result<Vec<f64>> {
    let rho = CurvatureFamily::new(conn, conn.frame()).extensor();
    let term = |dir: &VectorField, x: &VectorField, y: &VectorField| {
        cov_deriv_extensor(conn, dir, &rho).apply_vector(&[x.clone(), y.clone(), c.clone()], &[])
    };
    term(w, a, b)?.add(&term(a, b, w)?).add(&term(b, w, a)?).at(p)
}
