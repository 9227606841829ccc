//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::arith::{qz, to_integer, Q, Z};
use crate::error::{Error, Result};

pub type QMatrix = Vec<Vec<Q>>;
pub type ZMatrix = Vec<Vec<Z>>;

pub fn to_q(m: &[Vec<Z>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(qz).collect()).collect()
}

pub fn is_square<T>(m: &[Vec<T>]) -> bool {
    m.iter().all(|r| r.len() == m.len())
}

pub fn is_symmetric<T: PartialEq>(m: &[Vec<T>]) -> bool {
    is_square(m) && (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Determinant by fraction-exact Gaussian elimination. The empty matrix has
/// determinant 1.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= &f * y;
            }
        }
    }
    d
}

pub fn det_z(m: &[Vec<Z>]) -> Z {
    det(&to_q(m)).to_integer()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
                let t = &f * &inv[col][c];
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

/// Inverse of an integer matrix that must have determinant ±1.
pub fn unimodular_inverse(m: &[Vec<Z>]) -> Result<ZMatrix> {
    if !is_square(m) {
        return Err(Error::validation("matrix is not square"));
    }
    let d = det_z(m);
    if d != Z::one() && d != -Z::one() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    let inv = inverse(&to_q(m)).ok_or_else(|| Error::NotUnimodular("0".into()))?;
    inv.iter()
        .map(|r| r.iter().map(|x| to_integer(x, "unimodular inverse entry")).collect())
        .collect()
}

pub fn mat_mul_q(a: &[Vec<Q>], b: &[Vec<Q>]) -> QMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Bilinear form `u^T M w`.
pub fn bilinear(m: &[Vec<Z>], u: &[Z], w: &[Z]) -> Z {
    let mut acc = Z::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            acc += ui * &m[i][j] * wj;
        }
    }
    acc
}

pub fn bilinear_q(m: &[Vec<Z>], u: &[Q], w: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            acc += ui * qz(&m[i][j]) * wj;
        }
    }
    acc
}
