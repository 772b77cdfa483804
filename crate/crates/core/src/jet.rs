//! Forward-mode differentiation through truncated Taylor jets.
//!
//! [`Scalar`] is the numeric contract shared by every evaluator in the crate.
//! It is implemented for plain `f64`, for the statically nested [`Jet<T>`]
//! (`Jet<f64>`, `Jet<Jet<f64>>`, ...) and for [`Num`], a dynamically nested
//! tower used by lazily composed fields. Nesting one more level yields one
//! more derivative order, so second derivatives come from `Jet<Jet<f64>>` and
//! third from three levels.
//!
//! The newest differentiation level is always the outermost one. A jet with
//! an empty `partials` vector is a constant at that level; binary operations
//! treat missing partials as zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Numeric tower element: a real number, possibly carrying derivatives.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;

    /// The underlying real value with all derivative information dropped.
    fn re(&self) -> f64;

    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// Integer power by repeated squaring, so polynomial derivatives stay exact.
    fn powi(&self, n: i32) -> Self {
        let mut base = self.clone();
        let mut k = n.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    /// Real power `self^e`; the caller guarantees a positive base.
    fn powf(&self, e: &Self) -> Self {
        (e.clone() * self.ln()).exp()
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

/// First-order truncated Taylor value: `value + Σ partials[i]·εᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub partials: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(value: T) -> Self {
        Jet {
            value,
            partials: Vec::new(),
        }
    }

    /// The `index`-th of `n` independent variables, seeded with a unit partial.
    pub fn variable(value: T, index: usize, n: usize) -> Self {
        let partials = (0..n).map(|i| if i == index { T::one() } else { T::zero() }).collect();
        Jet { value, partials }
    }

    pub fn partial(&self, i: usize) -> T {
        self.partials.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Chain rule for a unary function with derivative `deriv` at `value`.
    fn chain(&self, value: T, deriv: T) -> Self {
        Jet {
            value,
            partials: self.partials.iter().map(|d| d.clone() * deriv.clone()).collect(),
        }
    }
}

fn zip_partials<T: Scalar>(
    a: &[T],
    b: &[T],
    both: impl Fn(&T, &T) -> T,
    left: impl Fn(&T) -> T,
    right: impl Fn(&T) -> T,
) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => both(x, y),
            (Some(x), None) => left(x),
            (None, Some(y)) => right(y),
            (None, None) => unreachable!(),
        })
        .collect()
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let partials = zip_partials(
            &self.partials,
            &rhs.partials,
            |x, y| x.clone() + y.clone(),
            T::clone,
            T::clone,
        );
        Jet {
            value: self.value + rhs.value,
            partials,
        }
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let partials = zip_partials(
            &self.partials,
            &rhs.partials,
            |x, y| x.clone() - y.clone(),
            T::clone,
            |y| -y.clone(),
        );
        Jet {
            value: self.value - rhs.value,
            partials,
        }
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (av, bv) = (&self.value, &rhs.value);
        let partials = zip_partials(
            &self.partials,
            &rhs.partials,
            |x, y| x.clone() * bv.clone() + av.clone() * y.clone(),
            |x| x.clone() * bv.clone(),
            |y| av.clone() * y.clone(),
        );
        Jet {
            value: self.value * rhs.value,
            partials,
        }
    }
}

impl<T: Scalar> Div for Jet<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // (a/b)' = (a' - q b') / b
        let q = self.value.clone() / rhs.value.clone();
        let b = &rhs.value;
        let partials = zip_partials(
            &self.partials,
            &rhs.partials,
            |x, y| (x.clone() - q.clone() * y.clone()) / b.clone(),
            |x| x.clone() / b.clone(),
            |y| -(q.clone() * y.clone()) / b.clone(),
        );
        Jet { value: q, partials }
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            value: -self.value,
            partials: self.partials.into_iter().map(|d| -d).collect(),
        }
    }
}

impl<T: Scalar> Scalar for Jet<T> {
    fn from_f64(v: f64) -> Self {
        Jet::constant(T::from_f64(v))
    }
    fn re(&self) -> f64 {
        self.value.re()
    }
    fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }
    fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }
    fn tan(&self) -> Self {
        let t = self.value.tan();
        let d = T::one() + t.clone() * t.clone();
        self.chain(t, d)
    }
    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e.clone(), e)
    }
    fn ln(&self) -> Self {
        self.chain(self.value.ln(), T::one() / self.value.clone())
    }
    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        let d = T::one() / (T::from_f64(2.0) * s.clone());
        self.chain(s, d)
    }
}

/// Dynamically nested jet tower.
///
/// Fields are stored as boxed closures and cannot be generic over the
/// numeric type, so they all evaluate over `Num`. Each call to [`Num::lift`]
/// adds one outer differentiation level.
#[derive(Clone, Debug)]
pub enum Num {
    Real(f64),
    Jet(Box<Jet<Num>>),
}

impl Num {
    /// Seeds a new outermost level: coordinate `i` gets unit partial `i`.
    pub fn lift(point: &[Num]) -> Vec<Num> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, x)| Num::Jet(Box::new(Jet::variable(x.clone(), i, n))))
            .collect()
    }

    /// Splits off the outermost level into `(value, ∂/∂x⁰..∂/∂xⁿ⁻¹)`.
    pub fn unlift(self, n: usize) -> (Num, Vec<Num>) {
        match self {
            Num::Real(_) => (self, vec![Num::Real(0.0); n]),
            Num::Jet(j) => {
                let Jet { value, mut partials } = *j;
                partials.resize(n, Num::Real(0.0));
                (value, partials)
            }
        }
    }

    pub fn from_point(p: &[f64]) -> Vec<Num> {
        p.iter().copied().map(Num::Real).collect()
    }

    /// Number of nested jet levels (0 for a plain real).
    pub fn depth(&self) -> usize {
        match self {
            Num::Real(_) => 0,
            Num::Jet(j) => {
                1 + j
                    .partials
                    .iter()
                    .map(Num::depth)
                    .chain(std::iter::once(j.value.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::Real(v)
    }
}

macro_rules! num_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Num {
            type Output = Num;
            fn $method(self, rhs: Num) -> Num {
                match (self, rhs) {
                    (Num::Real(a), Num::Real(b)) => Num::Real(a $op b),
                    (Num::Jet(a), Num::Jet(b)) => Num::Jet(Box::new(*a $op *b)),
                    (Num::Jet(a), b @ Num::Real(_)) => Num::Jet(Box::new(*a $op Jet::constant(b))),
                    (a @ Num::Real(_), Num::Jet(b)) => Num::Jet(Box::new(Jet::constant(a) $op *b)),
                }
            }
        }
    };
}

num_binop!(Add, add, +);
num_binop!(Sub, sub, -);
num_binop!(Div, div, /);

impl Mul for Num {
    type Output = Num;
    fn mul(self, rhs: Num) -> Num {
        match (self, rhs) {
            (Num::Real(a), Num::Real(b)) => Num::Real(a * b),
            (Num::Jet(a), Num::Jet(b)) => Num::Jet(Box::new(*a * *b)),
            // scaling by a constant needs no product rule
            (Num::Jet(a), b @ Num::Real(_)) | (b @ Num::Real(_), Num::Jet(a)) => {
                let Jet { value, partials } = *a;
                Num::Jet(Box::new(Jet {
                    value: value * b.clone(),
                    partials: partials.into_iter().map(|d| d * b.clone()).collect(),
                }))
            }
        }
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Real(a) => Num::Real(-a),
            Num::Jet(a) => Num::Jet(Box::new(-*a)),
        }
    }
}

macro_rules! num_unary {
    ($($name:ident),*) => {
        $(
            fn $name(&self) -> Self {
                match self {
                    Num::Real(a) => Num::Real(a.$name()),
                    Num::Jet(j) => Num::Jet(Box::new(j.$name())),
                }
            }
        )*
    };
}

impl Scalar for Num {
    fn from_f64(v: f64) -> Self {
        Num::Real(v)
    }
    fn re(&self) -> f64 {
        match self {
            Num::Real(a) => *a,
            Num::Jet(j) => j.value.re(),
        }
    }
    num_unary!(sin, cos, tan, exp, ln, sqrt);
}

/// Σ aᵢ·bᵢ over two equal-length slices.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_rule_first_order() {
        let x = Jet::variable(3.0, 0, 2);
        let y = Jet::variable(4.0, 1, 2);
        let f = x.clone() * x * y;
        assert_eq!(f.value, 36.0);
        assert_eq!(f.partials, vec![24.0, 9.0]);
    }

    #[test]
    fn nested_jet_gives_second_derivative() {
        // f(x) = x^3 at x = 2: f' = 12, f'' = 12
        let inner = Jet::variable(2.0, 0, 1);
        let x = Jet::variable(inner, 0, 1);
        let f = x.powi(3);
        assert_eq!(f.value.value, 8.0);
        assert_eq!(f.value.partials[0], 12.0);
        assert_eq!(f.partials[0].partials[0], 12.0);
    }

    #[test]
    fn num_lift_twice_matches_static_nesting() {
        let p = Num::from_point(&[0.7]);
        let x2 = Num::lift(&Num::lift(&p));
        let f = x2[0].sin() * x2[0].clone();
        let (v, d) = f.unlift(1);
        let (v0, dv0) = v.unlift(1);
        let (d0, dd0) = d[0].clone().unlift(1);
        let x = 0.7f64;
        assert_abs_diff_eq!(v0.re(), x.sin() * x, epsilon = 1e-15);
        assert_abs_diff_eq!(dv0[0].re(), x.cos() * x + x.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(d0.re(), x.cos() * x + x.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(dd0[0].re(), 2.0 * x.cos() - x.sin() * x, epsilon = 1e-14);
    }

    #[test]
    fn quotient_and_elementary_derivatives() {
        let x = Jet::variable(0.5, 0, 1);
        let cases: Vec<(Jet<f64>, f64)> = vec![
            (x.tan(), 1.0 / 0.5f64.cos().powi(2)),
            (x.ln(), 2.0),
            (x.sqrt(), 0.5 / 0.5f64.sqrt()),
            (x.exp(), 0.5f64.exp()),
            (Jet::from_f64(1.0) / x.clone(), -4.0),
            (x.powf(&Jet::from_f64(2.5)), 2.5 * 0.5f64.powf(1.5)),
            (x.powi(-2), -2.0 / 0.125),
        ];
        for (j, expected) in cases {
            assert_abs_diff_eq!(j.partials[0], expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn constants_carry_no_partials() {
        let c = Num::from_f64(3.0);
        let x = Num::lift(&[Num::Real(1.5)]).remove(0);
        let (v, d) = (c * x.clone() + Num::Real(1.0)).unlift(1);
        assert_eq!(v.re(), 5.5);
        assert_eq!(d[0].re(), 3.0);
        assert_eq!(x.depth(), 1);
    }
}
