//! Pointwise exterior algebra over an n-dimensional real fiber.
//!
//! Grade-k elements store their C(n,k) components densely, indexed by
//! strictly increasing multi-indices in lexicographic order. Components are
//! always relative to whichever frame pair the caller is working in; the
//! pairing between k-forms and k-vectors is then the plain component dot
//! product, which agrees with the determinant formula on decomposables.

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{GeomError, Result};

/// Contravariant (tangent) elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Up;
/// Covariant (cotangent) elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Down;

/// A homogeneous element of the exterior algebra of a fiber or its dual.
#[derive(Clone, Debug, PartialEq)]
pub struct Multi<K> {
    dim: usize,
    grade: usize,
    comps: Vec<f64>,
    _kind: PhantomData<K>,
}

/// k-vectors; grade 1 is an ordinary tangent vector.
pub type KVector = Multi<Up>;
/// k-forms; grade 1 is an ordinary covector.
pub type KForm = Multi<Down>;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing k-tuples from `0..n`, lexicographically.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Lexicographic rank of a strictly increasing multi-index.
fn rank(n: usize, idx: &[usize]) -> usize {
    let k = idx.len();
    let mut r = 0;
    let mut prev = 0;
    for (pos, &i) in idx.iter().enumerate() {
        for skipped in prev..i {
            r += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = i + 1;
    }
    r
}

fn check_indices(n: usize, idx: &[usize]) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(GeomError::domain(format!("index {bad} out of range for dimension {n}")));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GeomError::domain(format!(
            "multi-index {idx:?} is not strictly increasing"
        )));
    }
    Ok(())
}

impl<K> Multi<K> {
    pub fn zero(dim: usize, grade: usize) -> Result<Self> {
        if grade > dim {
            return Err(GeomError::domain(format!("grade {grade} exceeds dimension {dim}")));
        }
        Ok(Multi {
            dim,
            grade,
            comps: vec![0.0; binomial(dim, grade)],
            _kind: PhantomData,
        })
    }

    pub fn from_components(dim: usize, grade: usize, comps: Vec<f64>) -> Result<Self> {
        let expected = binomial(dim, grade);
        if grade > dim || comps.len() != expected {
            return Err(GeomError::domain(format!(
                "grade-{grade} element in dimension {dim} needs {expected} components, got {}",
                comps.len()
            )));
        }
        Ok(Multi {
            dim,
            grade,
            comps,
            _kind: PhantomData,
        })
    }

    /// Grade-1 element from its components.
    pub fn grade_one(comps: &[f64]) -> Self {
        Multi {
            dim: comps.len(),
            grade: 1,
            comps: comps.to_vec(),
            _kind: PhantomData,
        }
    }

    pub fn scalar(dim: usize, v: f64) -> Self {
        Multi {
            dim,
            grade: 0,
            comps: vec![v],
            _kind: PhantomData,
        }
    }

    /// Unit element at a strictly increasing multi-index (0-based).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        check_indices(dim, indices)?;
        let mut out = Self::zero(dim, indices.len())?;
        out.comps[rank(dim, indices)] = 1.0;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    /// Component at a strictly increasing multi-index.
    pub fn get(&self, indices: &[usize]) -> Result<f64> {
        if indices.len() != self.grade {
            return Err(GeomError::domain("multi-index length differs from grade"));
        }
        check_indices(self.dim, indices)?;
        Ok(self.comps[rank(self.dim, indices)])
    }

    /// Iterates `(multi-index, component)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        multi_indices(self.dim, self.grade)
            .into_iter()
            .zip(self.comps.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exterior product; fails when the grades sum past the dimension.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(GeomError::domain("wedge of elements over different fibers"));
        }
        let grade = self.grade + other.grade;
        if grade > self.dim {
            return Err(GeomError::domain(format!(
                "wedge of grades {} and {} overflows dimension {}",
                self.grade, other.grade, self.dim
            )));
        }
        let mut out = Self::zero(self.dim, grade)?;
        let left = multi_indices(self.dim, self.grade);
        let right = multi_indices(self.dim, other.grade);
        for (i, a) in left.iter().zip(&self.comps) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in right.iter().zip(&other.comps) {
                if *b == 0.0 || i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let inversions = i.iter().map(|x| j.iter().filter(|y| *y < x).count()).sum::<usize>();
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                let mut merged: Vec<usize> = i.iter().chain(j).copied().collect();
                merged.sort_unstable();
                out.comps[rank(self.dim, &merged)] += sign * a * b;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Multi {
            comps: self.comps.iter().map(|c| c * s).collect(),
            dim: self.dim,
            grade: self.grade,
            _kind: PhantomData,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.dim != other.dim || self.grade != other.grade {
            return Err(GeomError::domain("combining elements of different grade"));
        }
        Ok(Multi {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(*a, *b)).collect(),
            dim: self.dim,
            grade: self.grade,
            _kind: PhantomData,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// Duality pairing ⟨ω, X⟩ between a k-form and a k-vector.
pub fn pair(omega: &KForm, x: &KVector) -> Result<f64> {
    if omega.grade != x.grade || omega.dim != x.dim {
        return Err(GeomError::domain(format!(
            "cannot pair a grade-{} form with a grade-{} vector",
            omega.grade, x.grade
        )));
    }
    Ok(omega.comps.iter().zip(&x.comps).map(|(a, b)| a * b).sum())
}

pub fn basis_kvector(dim: usize, indices: &[usize]) -> Result<KVector> {
    KVector::basis(dim, indices)
}

pub fn basis_kform(dim: usize, indices: &[usize]) -> Result<KForm> {
    KForm::basis(dim, indices)
}

// Operator sugar for same-shape elements; shape mismatches are programming
// errors here, use `try_add`/`try_sub` on untrusted input.
impl<K> Add for &Multi<K> {
    type Output = Multi<K>;
    fn add(self, rhs: Self) -> Multi<K> {
        self.try_add(rhs).expect("grade mismatch in addition")
    }
}

impl<K> Sub for &Multi<K> {
    type Output = Multi<K>;
    fn sub(self, rhs: Self) -> Multi<K> {
        self.try_sub(rhs).expect("grade mismatch in subtraction")
    }
}

impl<K> Mul<f64> for &Multi<K> {
    type Output = Multi<K>;
    fn mul(self, s: f64) -> Multi<K> {
        self.scale(s)
    }
}

impl<K> Neg for &Multi<K> {
    type Output = Multi<K>;
    fn neg(self) -> Multi<K> {
        self.scale(-1.0)
    }
}

impl<K: 'static> fmt::Display for Multi<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prefix, sep) = if std::any::TypeId::of::<K>() == std::any::TypeId::of::<Down>() {
            ("dx", "^")
        } else {
            ("e", "^")
        };
        let mut first = true;
        for (idx, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (pos, i) in idx.iter().enumerate() {
                let joiner = if pos == 0 { " " } else { sep };
                write!(f, "{joiner}{prefix}{}", i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
