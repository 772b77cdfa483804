//! Charts, points and smooth fields over the jet tower.
//!
//! Every field is a lazily evaluated closure over [`Num`] coordinates and
//! returns components in the chart's coordinate frame. Differentiating a
//! field means evaluating it at a lifted point (one more jet level), so
//! operators built from other operators nest without special cases.

use std::marker::PhantomData;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::expr::CompiledExpr;
use crate::exterior::{Down, KForm, Up};
use crate::jet::{dot, Num, Scalar};

pub(crate) type PointFn<T> = dyn Fn(&[Num]) -> Result<T> + Send + Sync;

/// A coordinate chart restricted to a closed sampling box.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<(f64, f64)>,
}

impl Chart {
    pub fn new<S: Into<String>>(names: Vec<S>, domain: Vec<(f64, f64)>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(GeomError::domain("chart needs at least one coordinate"));
        }
        if names.len() != domain.len() {
            return Err(GeomError::domain(format!(
                "{} coordinate names but {} domain intervals",
                names.len(),
                domain.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(GeomError::domain(format!("duplicate coordinate '{name}'")));
            }
        }
        if let Some((lo, hi)) = domain
            .iter()
            .find(|(lo, hi)| lo.partial_cmp(hi) != Some(std::cmp::Ordering::Less))
        {
            return Err(GeomError::domain(format!("empty domain interval [{lo}, {hi}]")));
        }
        Ok(Chart { names, domain })
    }

    /// Chart with coordinates `x1..xn` on the given box.
    pub fn standard(domain: Vec<(f64, f64)>) -> Result<Self> {
        let names = (1..=domain.len()).map(|i| format!("x{i}")).collect();
        Chart::new(names, domain)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.domain).all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        if !self.contains(coords) {
            return Err(GeomError::OutsideDomain { point: coords.to_vec() });
        }
        Ok(Point(coords.to_vec()))
    }

    /// Same coordinates on a sub-box, e.g. the overlap of two charts.
    pub fn restrict(&self, domain: Vec<(f64, f64)>) -> Result<Self> {
        let sub = Chart::new(self.names.clone(), domain)?;
        let inside = sub
            .domain
            .iter()
            .zip(&self.domain)
            .all(|((a, b), (lo, hi))| lo <= a && b <= hi);
        if !inside {
            return Err(GeomError::domain("sub-box is not contained in the chart"));
        }
        Ok(sub)
    }

    /// Regular grid with `per_axis` nodes along each axis, corners included.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let per_axis = per_axis.max(2);
        let total = per_axis.pow(self.dim() as u32);
        (0..total)
            .map(|mut k| {
                self.domain
                    .iter()
                    .map(|(lo, hi)| {
                        let i = k % per_axis;
                        k /= per_axis;
                        lo + (hi - lo) * i as f64 / (per_axis - 1) as f64
                    })
                    .collect()
            })
            .collect()
    }

    /// Grid used to validate frames and operator fields before use.
    pub fn validation_points(&self) -> Vec<Vec<f64>> {
        self.grid(if self.dim() <= 3 { 7 } else { 4 })
    }
}

/// A point inside a chart's sampling box.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Smooth scalar field.
#[derive(Clone)]
pub struct ScalarField(Arc<PointFn<Num>>);

impl ScalarField {
    pub fn new(f: impl Fn(&[Num]) -> Result<Num> + Send + Sync + 'static) -> Self {
        ScalarField(Arc::new(f))
    }

    pub fn constant(v: f64) -> Self {
        ScalarField::new(move |_| Ok(Num::Real(v)))
    }

    /// The coordinate function xⁱ.
    pub fn coordinate(i: usize) -> Self {
        ScalarField::new(move |x| {
            x.get(i)
                .cloned()
                .ok_or_else(|| GeomError::domain(format!("no coordinate {i}")))
        })
    }

    pub fn from_expr(expr: CompiledExpr) -> Self {
        ScalarField::new(move |x| Ok(expr.eval(x)?))
    }

    pub fn eval(&self, x: &[Num]) -> Result<Num> {
        (self.0)(x)
    }

    pub fn at(&self, p: &[f64]) -> Result<f64> {
        self.eval(&Num::from_point(p))
            .map(|v| v.re())
            .map_err(|e| e.at_point(p))
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        let (f, g) = (self.clone(), other.clone());
        ScalarField::new(move |x| Ok(f.eval(x)? + g.eval(x)?))
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        let (f, g) = (self.clone(), other.clone());
        ScalarField::new(move |x| Ok(f.eval(x)? - g.eval(x)?))
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        let (f, g) = (self.clone(), other.clone());
        ScalarField::new(move |x| Ok(f.eval(x)? * g.eval(x)?))
    }
}

/// Field of n components in the coordinate frame; `K` tells vectors from forms.
pub struct Field<K> {
    dim: usize,
    eval: Arc<PointFn<Vec<Num>>>,
    _kind: PhantomData<fn() -> K>,
}

pub type VectorField = Field<Up>;
pub type FormField = Field<Down>;

impl<K> Clone for Field<K> {
    fn clone(&self) -> Self {
        Field {
            dim: self.dim,
            eval: Arc::clone(&self.eval),
            _kind: PhantomData,
        }
    }
}

impl<K: 'static> Field<K> {
    pub fn new(dim: usize, f: impl Fn(&[Num]) -> Result<Vec<Num>> + Send + Sync + 'static) -> Self {
        Field {
            dim,
            eval: Arc::new(f),
            _kind: PhantomData,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Field::new(dim, move |_| Ok(vec![Num::Real(0.0); dim]))
    }

    pub fn constant(comps: &[f64]) -> Self {
        let comps: Vec<Num> = comps.iter().copied().map(Num::Real).collect();
        Field::new(comps.len(), move |_| Ok(comps.clone()))
    }

    /// The i-th coordinate basis field (∂ᵢ or dxⁱ).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut comps = vec![0.0; dim];
        comps[i] = 1.0;
        Field::constant(&comps)
    }

    pub fn from_components(comps: Vec<ScalarField>) -> Self {
        Field::new(comps.len(), move |x| comps.iter().map(|c| c.eval(x)).collect())
    }

    pub fn from_exprs(exprs: Vec<CompiledExpr>) -> Self {
        Field::from_components(exprs.into_iter().map(ScalarField::from_expr).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[Num]) -> Result<Vec<Num>> {
        let out = (self.eval)(x)?;
        debug_assert_eq!(out.len(), self.dim);
        Ok(out)
    }

    pub fn at(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.eval(&Num::from_point(p))
            .map(|v| v.iter().map(Num::re).collect())
            .map_err(|e| e.at_point(p))
    }

    /// Value and coordinate Jacobian `[component][∂ index]` at `x`.
    pub fn jet(&self, x: &[Num]) -> Result<(Vec<Num>, Vec<Vec<Num>>)> {
        let n = x.len();
        let (vals, grads) = self.eval(&Num::lift(x))?.into_iter().map(|c| c.unlift(n)).unzip();
        Ok((vals, grads))
    }

    pub fn component(&self, i: usize) -> ScalarField {
        let f = self.clone();
        ScalarField::new(move |x| Ok(f.eval(x)?.swap_remove(i)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Field::new(self.dim, move |x| {
            Ok(f.eval(x)?.into_iter().zip(g.eval(x)?).map(|(a, b)| a + b).collect())
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Field::new(self.dim, move |x| {
            Ok(f.eval(x)?.into_iter().zip(g.eval(x)?).map(|(a, b)| a - b).collect())
        })
    }

    /// Pointwise product with a scalar field.
    pub fn scale(&self, s: &ScalarField) -> Self {
        let (f, s) = (self.clone(), s.clone());
        Field::new(self.dim, move |x| {
            let k = s.eval(x)?;
            Ok(f.eval(x)?.into_iter().map(|c| c * k.clone()).collect())
        })
    }

    pub fn scale_const(&self, k: f64) -> Self {
        let f = self.clone();
        Field::new(self.dim, move |x| {
            Ok(f.eval(x)?.into_iter().map(|c| c * Num::Real(k)).collect())
        })
    }
}

/// ⟨ω, v⟩ as a scalar field.
pub fn pairing(omega: &FormField, v: &VectorField) -> ScalarField {
    let (w, v) = (omega.clone(), v.clone());
    ScalarField::new(move |x| Ok(dot(&w.eval(x)?, &v.eval(x)?)))
}

fn scalar_gradient(f: &ScalarField, x: &[Num]) -> Result<(Num, Vec<Num>)> {
    Ok(f.eval(&Num::lift(x))?.unlift(x.len()))
}

/// The field `af = Σ aᵘ ∂ᵤf`, evaluated lazily.
pub fn derivative(a: &VectorField, f: &ScalarField) -> ScalarField {
    let (a, f) = (a.clone(), f.clone());
    ScalarField::new(move |x| {
        let (_, grad) = scalar_gradient(&f, x)?;
        Ok(dot(&a.eval(x)?, &grad))
    })
}

/// `(af)(p)` with exact jet partials.
pub fn directional_derivative(a: &VectorField, f: &ScalarField, p: &[f64]) -> Result<f64> {
    derivative(a, f).at(p)
}

/// Lie bracket `[a,b]ᵘ = aᵛ∂ᵥbᵘ − bᵛ∂ᵥaᵘ`.
pub fn lie_bracket(a: &VectorField, b: &VectorField) -> VectorField {
    let (a, b) = (a.clone(), b.clone());
    Field::new(a.dim(), move |x| {
        let (av, ajac) = a.jet(x)?;
        let (bv, bjac) = b.jet(x)?;
        Ok(ajac
            .iter()
            .zip(&bjac)
            .map(|(da, db)| dot(&av, db) - dot(&bv, da))
            .collect())
    })
}

/// Components of dω for μ<ν in lexicographic order, at any jet level.
pub fn exterior_derivative_components(omega: &FormField, x: &[Num]) -> Result<Vec<Num>> {
    let (_, jac) = omega.jet(x)?;
    let n = x.len();
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for mu in 0..n {
        for nu in mu + 1..n {
            out.push(jac[nu][mu].clone() - jac[mu][nu].clone());
        }
    }
    Ok(out)
}

/// dω at `p`: `Σ_{μ<ν} (∂ᵤωᵥ − ∂ᵥωᵤ) dxᵘ∧dxᵛ`.
pub fn exterior_derivative_1form(omega: &FormField, p: &[f64]) -> Result<KForm> {
    let comps = exterior_derivative_components(omega, &Num::from_point(p)).map_err(|e| e.at_point(p))?;
    KForm::from_components(p.len(), 2, comps.iter().map(Num::re).collect())
}

/// df as a form field on an n-dimensional chart.
pub fn differential(f: &ScalarField, dim: usize) -> FormField {
    let f = f.clone();
    FormField::new(dim, move |x| Ok(scalar_gradient(&f, x)?.1))
}

/// df at `p` in the coordinate coframe.
pub fn scalar_differential(f: &ScalarField, p: &[f64]) -> Result<Vec<f64>> {
    let (_, grad) = scalar_gradient(f, &Num::from_point(p)).map_err(|e| e.at_point(p))?;
    Ok(grad.iter().map(Num::re).collect())
}
