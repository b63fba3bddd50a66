//! Small dense least-squares kernel: Householder QR solve and a one-sided
//! Jacobi SVD for singular values. Matrices are row-major `Vec<Vec<T>>`
//! with a handful of columns; nothing here is tuned for size.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Singular values of an m×n matrix (m ≥ n), descending.
pub fn singular_values<T: Real>(a: &[Vec<T>]) -> Vec<T> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    // Columns as vectors.
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: T = cols[p].iter().map(|x| *x * *x).sum();
                let beta: T = cols[q].iter().map(|x| *x * *x).sum();
                let gamma: T = cols[p].iter().zip(&cols[q]).map(|(x, y)| *x * *y).sum();
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::two() * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                for i in 0..m {
                    let xp = cols[p][i];
                    let xq = cols[q][i];
                    cols[p][i] = c * xp - s * xq;
                    cols[q][i] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|x| *x * *x).sum::<T>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// 2-norm condition number σ_max/σ_min.
pub fn condition_number<T: Real>(a: &[Vec<T>]) -> T {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        _ => T::infinity(),
    }
}

/// Minimizes ‖A x − b‖₂ by Householder QR. Fails when R has a pivot below
/// `eps · ‖R‖` (numerically rank deficient).
pub fn least_squares<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let m = a.len();
    if m == 0 || b.len() != m {
        return Err(Error::domain("least squares: dimension mismatch"));
    }
    let n = a[0].len();
    if m < n {
        return Err(Error::domain("least squares: fewer rows than unknowns"));
    }
    let mut r: Vec<Vec<T>> = a.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| r[i][k] * r[i][k]).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let alpha = if r[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|x| *x * *x).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        for j in k..n {
            let dot: T = v.iter().enumerate().map(|(i, vi)| *vi * r[k + i][j]).sum();
            let f = T::two() * dot / vnorm2;
            for (i, vi) in v.iter().enumerate() {
                r[k + i][j] -= f * *vi;
            }
        }
        let dot: T = v.iter().enumerate().map(|(i, vi)| *vi * rhs[k + i]).sum();
        let f = T::two() * dot / vnorm2;
        for (i, vi) in v.iter().enumerate() {
            rhs[k + i] -= f * *vi;
        }
    }
    let rmax = (0..n).fold(T::zero(), |acc, k| acc.max(r[k][k].abs()));
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        if r[k][k].abs() <= T::epsilon() * rmax * T::from_usize_lossy(m) {
            return Err(Error::RankDeficient {
                condition: f64::INFINITY,
            });
        }
        let s: T = ((k + 1)..n).map(|j| r[k][j] * x[j]).sum();
        x[k] = (rhs[k] - s) / r[k][k];
    }
    Ok(x)
}
