//! Identity suites and the sampling harness that runs them.
//!
//! Sample `i` of suite `s` draws everything from substream `(seed, s, i)`,
//! where `s` is the suite's position in [`Suite::ALL`]. Samples run in
//! parallel and are folded in index order, so reports do not depend on
//! the thread count.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use parstruct_core::cartan::CurvatureFamily;
use parstruct_core::cartan::{
    cartan_first_residual, cartan_second_residual, curvature_duality_residual, gamma_minus, gamma_plus,
    torsion_duality_residual, TorsionFamily,
};
use parstruct_core::chart::{pairing, scalar_differential};
use parstruct_core::connection::axiom_residuals;
use parstruct_core::jet::dot;
use parstruct_core::sample::{Sampler, SplitMix64};
use parstruct_core::zoo::{
    bianchi_residual, cyclic_residual, deform, Deformation, JacobianField, RelativeStructure, SplitDecomposition,
    VectorOperatorField,
};
use parstruct_core::{Chart, Connection, FramePair, Num, Result, Scalar, ScalarField};

use crate::config::SpecConfig;
use crate::report::{Report, Status, SuiteResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Axioms,
    Cartan1,
    Cartan2,
    Duality,
    Complement,
    Inversion,
    Symmetry,
    Cyclic,
    Bianchi,
    Deformation,
    Relative,
    Split,
    Jacobian,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Axioms,
        Suite::Cartan1,
        Suite::Cartan2,
        Suite::Duality,
        Suite::Complement,
        Suite::Inversion,
        Suite::Symmetry,
        Suite::Cyclic,
        Suite::Bianchi,
        Suite::Deformation,
        Suite::Relative,
        Suite::Split,
        Suite::Jacobian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Cartan1 => "cartan1",
            Suite::Cartan2 => "cartan2",
            Suite::Duality => "duality",
            Suite::Complement => "complement",
            Suite::Inversion => "inversion",
            Suite::Symmetry => "symmetry",
            Suite::Cyclic => "cyclic",
            Suite::Bianchi => "bianchi",
            Suite::Deformation => "deformation",
            Suite::Relative => "relative",
            Suite::Split => "split",
            Suite::Jacobian => "jacobian",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Axioms => "strong linearity in the direction, Leibniz rule in the argument",
            Suite::Cartan1 => "first structure equation Θ(ω) = dω − Γ⁻(e_σ,ω)∧ε^σ",
            Suite::Cartan2 => "second structure equation Ω(c,ω) = dΓ⁺(c,ω) + Γ⁺(c,ε^σ)∧Γ⁻(e_σ,ω)",
            Suite::Duality => "⟨ω,𝒯(X²)⟩ = ⟨Θ(ω),X²⟩ and ⟨ω,ℛ_c(X²)⟩ = ⟨Ω_c(ω),X²⟩",
            Suite::Complement => "Γ⁺(v,ω) + Γ⁻(v,ω) = d⟨ω,v⟩",
            Suite::Inversion => "⟨Γ⁺(v,ω),a⟩ = ⟨ω,∇_a v⟩, ⟨Γ⁻(v,ω),a⟩ = ⟨∇_aω,v⟩, and ∇ rebuilt from Γ±",
            Suite::Symmetry => "τ(a,b) = 0 and Θ(ω) = 0",
            Suite::Cyclic => "ρ(a,b,c) + ρ(b,c,a) + ρ(c,a,b) = 0 (symmetric connections)",
            Suite::Bianchi => "∇_wρ(a,b,c) + ∇_aρ(b,w,c) + ∇_bρ(w,a,c) = 0 (symmetric connections)",
            Suite::Deformation => "∇̂_a v = λ(∇_a λ⁻¹v) and ∇̂_aω = λ^{−△}(∇_a λ^△ω)",
            Suite::Relative => "∂_a b_μ = 0, ∂_aβ^ν = 0, τ and Θ from dβ^σ, ρ = 0",
            Suite::Split => "Γ = B + γ on vectors and ∇_aω = ∂_aω − γ_a^△ω on forms",
            Suite::Jacobian => "J(b_μ) = b'_μ, ∂'_a v = J(∂_a J⁻¹v), form and coframe laws",
        }
    }

    /// 1e-10 for first-order identities, 1e-9 for the structure equations,
    /// 1e-8 where third-order jets are involved.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Cartan1 | Suite::Cartan2 => 1e-9,
            Suite::Cyclic | Suite::Bianchi => 1e-8,
            _ => 1e-10,
        }
    }

    fn stream(self) -> u32 {
        Suite::ALL.iter().position(|s| *s == self).expect("suite listed") as u32
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fallback λ when the config has no `[deformation]` block: upper
/// triangular with diagonal `1.5 + 0.5 sin xⱼ`, so `det λ ≥ 1` everywhere.
pub fn default_deformation(dim: usize) -> VectorOperatorField {
    let rows = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match i.cmp(&j) {
                    Ordering::Equal => ScalarField::new(move |x| Ok(x[i].sin() * Num::Real(0.5) + Num::Real(1.5))),
                    Ordering::Less => ScalarField::new(move |x| Ok(x[i].cos() * Num::Real(0.2))),
                    Ordering::Greater => ScalarField::constant(0.0),
                })
                .collect()
        })
        .collect();
    VectorOperatorField::from_fields(rows).expect("square by construction")
}

type Sample = (f64, Vec<f64>);

/// Objects shared by every sample of a run.
struct Context<'a> {
    cfg: &'a SpecConfig,
    deformation: Option<(Deformation, Connection)>,
    symmetric: bool,
}

impl Context<'_> {
    fn conn(&self) -> &Connection {
        &self.cfg.connection
    }

    /// The configured frame, or a random one when the config uses
    /// coordinates and the identity would otherwise be checked trivially.
    fn frame_or_random(&self, s: &mut Sampler) -> Result<FramePair> {
        if self.cfg.frame.is_coordinate() {
            s.frame()
        } else {
            Ok(self.cfg.frame.clone())
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn sample(suite: Suite, ctx: &Context, s: &mut Sampler) -> Result<Sample> {
    let conn = ctx.conn();
    let frame = conn.frame();
    match suite {
        Suite::Axioms => {
            let (strong, quasi, p) = axiom_residuals(conn, s)?;
            Ok((strong.max(quasi), p))
        }
        Suite::Cartan1 => {
            let w = s.form_field();
            let p = s.point();
            Ok((cartan_first_residual(conn, frame, &w, &p)?.max_abs(), p))
        }
        Suite::Cartan2 => {
            let (c, w) = (s.vector_field(), s.form_field());
            let p = s.point();
            Ok((cartan_second_residual(conn, frame, &c, &w, &p)?.max_abs(), p))
        }
        Suite::Duality => {
            let (c, w, x2) = (s.vector_field(), s.form_field(), s.bivector());
            let p = s.point();
            let t = torsion_duality_residual(conn, frame, &w, &x2, &p)?;
            let r = curvature_duality_residual(conn, frame, &c, &w, &x2, &p)?;
            Ok((t.max(r), p))
        }
        Suite::Complement => {
            let (v, w) = (s.vector_field(), s.form_field());
            let p = s.point();
            let plus = gamma_plus(conn, frame, &v, &w).at(&p)?;
            let minus = gamma_minus(conn, frame, &v, &w).at(&p)?;
            let d = scalar_differential(&pairing(&w, &v), &p)?;
            let sum: Vec<f64> = plus.iter().zip(&minus).map(|(x, y)| x + y).collect();
            Ok((max_diff(&sum, &d), p))
        }
        Suite::Inversion => {
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            let (av, vv, wv) = (a.at(&p)?, v.at(&p)?, w.at(&p)?);
            let nv = conn.nabla(&a, &v).at(&p)?;
            let nw = conn.nabla_form(&a, &w).at(&p)?;
            let plus = dot(&gamma_plus(conn, frame, &v, &w).at(&p)?, &av) - dot(&wv, &nv);
            let minus = dot(&gamma_minus(conn, frame, &v, &w).at(&p)?, &av) - dot(&nw, &vv);
            // ∇_a v = ⟨Γ⁺(v,ε^σ),a⟩ e_σ and ∇_aω = ⟨Γ⁻(e_σ,ω),a⟩ ε^σ
            let n = conn.dim();
            let (mut rv, mut rw) = (vec![0.0; n], vec![0.0; n]);
            for (e, eps) in frame.vectors().iter().zip(frame.coforms()) {
                let kv = dot(&gamma_plus(conn, frame, &v, &eps).at(&p)?, &av);
                let kw = dot(&gamma_minus(conn, frame, e, &w).at(&p)?, &av);
                for (o, c) in rv.iter_mut().zip(e.at(&p)?) {
                    *o += kv * c;
                }
                for (o, c) in rw.iter_mut().zip(eps.at(&p)?) {
                    *o += kw * c;
                }
            }
            let r = plus
                .abs()
                .max(minus.abs())
                .max(max_diff(&rv, &nv))
                .max(max_diff(&rw, &nw));
            Ok((r, p))
        }
        Suite::Symmetry => {
            let (a, b, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            let t = TorsionFamily::new(conn, frame);
            Ok((max_abs(&t.tau_at(&a, &b, &p)?).max(t.theta(&w, &p)?.max_abs()), p))
        }
        Suite::Cyclic => {
            let (a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field());
            let p = s.point();
            Ok((max_abs(&cyclic_residual(conn, &a, &b, &c, &p)?), p))
        }
        Suite::Bianchi => {
            let (w, a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field(), s.vector_field());
            let p = s.point();
            Ok((max_abs(&bianchi_residual(conn, &w, &a, &b, &c, &p)?), p))
        }
        Suite::Deformation => {
            let (d, deformed) = ctx.deformation.as_ref().expect("built for the deformation suite");
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            let r = d
                .inverse_residual(&p)?
                .max(d.dps2_residual(conn, deformed, &a, &v, &p)?)
                .max(d.dps4_residual(conn, deformed, &a, &w, &p)?);
            Ok((r, p))
        }
        Suite::Relative => {
            let r = RelativeStructure::new(ctx.frame_or_random(s)?);
            let (a, b, c, w) = (s.vector_field(), s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            let rho = CurvatureFamily::new(r.connection(), r.frame()).rho_at(&a, &b, &c, &p)?;
            let res = r
                .rps3_residual(&a, &p)?
                .max(r.rps5_residual(&a, &p)?)
                .max(r.rps6_residual(&a, &b, &p)?)
                .max(r.rps7_residual(&w, &p)?)
                .max(max_abs(&rho));
            Ok((res, p))
        }
        Suite::Split => {
            let split = SplitDecomposition::new(conn, ctx.frame_or_random(s)?);
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            Ok((
                split.sth2_residual(&a, &v, &p)?.max(split.sth4_residual(&a, &w, &p)?),
                p,
            ))
        }
        Suite::Jacobian => {
            let (frame_a, frame_b) = match &ctx.cfg.overlap {
                Some(o) => (ctx.cfg.frame.clone(), o.frame.clone()),
                None => (ctx.cfg.frame.clone(), s.frame()?),
            };
            let j = JacobianField::new(&frame_a, &frame_b);
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            let r = j
                .identity_residual(&p)?
                .max(j.jf3_residual(&p)?)
                .max(j.jf4_residual(&a, &v, &p)?)
                .max(j.jf5_residual(&a, &w, &p)?)
                .max(j.jf6_residual(&p)?);
            Ok((r, p))
        }
    }
}

/// Runs `samples` draws of one suite; `Err` carries the first failing
/// sample in index order.
fn run_samples(suite: Suite, ctx: &Context, chart: &Chart, samples: usize) -> std::result::Result<Sample, String> {
    let seed = ctx.cfg.seed;
    let results: Vec<Result<Sample>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::new(chart, SplitMix64::substream(seed, suite.stream(), i as u32));
            sample(suite, ctx, &mut s)
        })
        .collect();
    let mut worst: Sample = (0.0, Vec::new());
    for (i, r) in results.into_iter().enumerate() {
        let (res, p) = r.map_err(|e| format!("sample {i}: {e}"))?;
        if res.is_nan() || res > worst.0 || worst.1.is_empty() {
            worst = (res, p);
            if res.is_nan() {
                break;
            }
        }
    }
    Ok(worst)
}

/// Runs the configured suites with `samples` draws each.
pub fn run_suites(cfg: &SpecConfig) -> Report {
    let deformation = cfg.suites.contains(&Suite::Deformation).then(|| {
        let lambda = cfg
            .deformation
            .clone()
            .unwrap_or_else(|| default_deformation(cfg.chart.dim()));
        Deformation::new(&cfg.chart, lambda).map(|d| {
            let g = deform(&cfg.connection, &d);
            (d, g)
        })
    });
    let (deformation, deformation_error) = match deformation {
        Some(Ok(d)) => (Some(d), None),
        Some(Err(e)) => (None, Some(e.to_string())),
        None => (None, None),
    };
    let mut ctx = Context {
        cfg,
        deformation,
        symmetric: true,
    };

    let needs_symmetry = cfg.suites.iter().any(|s| matches!(s, Suite::Cyclic | Suite::Bianchi));
    if needs_symmetry {
        ctx.symmetric = matches!(
            run_samples(Suite::Symmetry, &ctx, &cfg.chart, cfg.samples),
            Ok((r, _)) if r <= cfg.tolerance(Suite::Symmetry)
        );
    }

    let mut results = Vec::new();
    for &suite in &cfg.suites {
        let tolerance = cfg.tolerance(suite);
        let chart = match (suite, &cfg.overlap) {
            (Suite::Jacobian, Some(o)) => &o.chart,
            _ => &cfg.chart,
        };
        let outcome = match (suite, &deformation_error) {
            (Suite::Deformation, Some(e)) => Err(e.clone()),
            _ => run_samples(suite, &ctx, chart, cfg.samples),
        };
        let result = match outcome {
            Ok((max_residual, worst_point)) => {
                let within = max_residual <= tolerance;
                let (status, note) = match suite {
                    Suite::Symmetry if cfg.expected_asymmetric => {
                        if within {
                            (
                                Status::Fail,
                                Some("expected asymmetric, but torsion vanished".to_string()),
                            )
                        } else {
                            (Status::ExpectedFail, Some("torsion present, as expected".to_string()))
                        }
                    }
                    Suite::Cyclic | Suite::Bianchi if !ctx.symmetric => (
                        Status::Informational,
                        Some("connection is not symmetric; the identity is not expected to hold".to_string()),
                    ),
                    _ if within => (Status::Pass, None),
                    _ => (Status::Fail, None),
                };
                SuiteResult {
                    name: suite.name().to_string(),
                    status,
                    max_residual: Some(max_residual),
                    tolerance,
                    samples: cfg.samples,
                    worst_point,
                    note,
                }
            }
            Err(message) => SuiteResult {
                name: suite.name().to_string(),
                status: Status::Error,
                max_residual: None,
                tolerance,
                samples: cfg.samples,
                worst_point: Vec::new(),
                note: Some(format!("{suite}: {message}")),
            },
        };
        results.push(result);
    }
    Report::new(cfg, results)
}
