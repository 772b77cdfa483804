//! Dense n×n helpers over the numeric tower (n is tiny here).

use crate::error::{GeomError, Result};
use crate::jet::Scalar;

/// |det| at or below this is treated as singular.
pub const SINGULAR_DET: f64 = 1e-8;

/// Inverse and determinant by Gauss–Jordan with partial pivoting on the
/// real part. Pivot choice is piecewise constant, so jet parts stay exact.
pub fn invert<S: Scalar>(m: &[Vec<S>], what: &str) -> Result<(Vec<Vec<S>>, S)> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| S::from_f64(f64::from(u8::from(i == j)))).collect())
        .collect();
    let mut det = S::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].re().abs().total_cmp(&a[j][col].re().abs()))
            .unwrap_or(col);
        if a[pivot][col].re() == 0.0 {
            return Err(singular(what, 0.0));
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = a[i][col].clone();
            for j in 0..n {
                a[i][j] = a[i][j].clone() - factor.clone() * a[col][j].clone();
                inv[i][j] = inv[i][j].clone() - factor.clone() * inv[col][j].clone();
            }
        }
    }
    if det.re().abs() <= SINGULAR_DET {
        return Err(singular(what, det.re()));
    }
    Ok((inv, det))
}

fn singular(what: &str, det: f64) -> GeomError {
    GeomError::Singular {
        what: what.to_string(),
        point: Vec::new(),
        det,
    }
}

/// `m · v` for row-major `m`.
pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter().map(|row| crate::jet::dot(row, v)).collect()
}

/// `mᵀ · v`.
pub fn mat_t_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| {
            m.iter()
                .zip(v)
                .fold(S::zero(), |acc, (row, x)| acc + row[j].clone() * x.clone())
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(S::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<S: Scalar>(m: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}
