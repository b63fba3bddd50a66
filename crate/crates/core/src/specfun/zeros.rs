//! Positive zeros j_{ν,n} of J_ν.
//!
//! Zeros are located by a sign scan and then polished with Newton steps
//! safeguarded by bisection. Consecutive zeros of J_ν (ν ≥ 0) are more than
//! 3.1 apart and j_{ν,1} > ν, so a unit-step scan starting at ν cannot skip
//! a zero. The McMahon expansion seeds Newton when it lands inside the
//! bracket.

use super::bessel_j::j_and_derivative_unchecked;
use crate::error::{Error, Result};
use crate::scalar::Real;

const SCAN_STEP: f64 = 1.0;
/// Lower bound on the gap between consecutive positive zeros, minus slack.
const MIN_GAP: f64 = 3.0;

/// McMahon's large-zero expansion for j_{ν,n}.
pub fn mcmahon_guess<T: Real>(order: T, n: usize) -> T {
    let mu = T::lit(4.0) * order * order;
    let beta = (T::from_usize_lossy(n) + order * T::half() - T::lit(0.25)) * T::PI();
    let b8 = T::lit(8.0) * beta;
    let m1 = mu - T::one();
    beta - m1 / b8
        - T::lit(4.0) * m1 * (T::lit(7.0) * mu - T::lit(31.0)) / (T::lit(3.0) * b8.powi(3))
        - T::lit(32.0) * m1 * (T::lit(83.0) * mu * mu - T::lit(982.0) * mu + T::lit(3779.0))
            / (T::lit(15.0) * b8.powi(5))
}

fn refine<T: Real>(nu: T, mut lo: T, mut hi: T, f_lo: T, guess: Option<T>) -> Result<T> {
    let mut x = match guess {
        Some(g) if g > lo && g < hi => g,
        _ => (lo + hi) * T::half(),
    };
    let tol = T::lit(4.0) * T::epsilon();
    for _ in 0..200 {
        let (j, dj) = j_and_derivative_unchecked(nu, x)?;
        if j == T::zero() {
            return Ok(x);
        }
        if (j > T::zero()) == (f_lo > T::zero()) {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - j / dj;
        let next = if dj != T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::half()
        };
        if (next - x).abs() <= tol * x || (hi - lo) <= tol * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NonConvergence(format!(
        "zero of J_{nu} in [{lo}, {hi}]"
    )))
}

/// Scans for the next zero after `start`, stopping at `limit`.
fn next_zero<T: Real>(nu: T, start: T, limit: T, index: usize) -> Result<Option<T>> {
    let step = T::lit(SCAN_STEP);
    let mut a = start;
    let mut fa = j_and_derivative_unchecked(nu, a)?.0;
    if fa == T::zero() {
        // Nudge off an exact zero left of the bracket.
        a += T::lit(1e-9);
        fa = j_and_derivative_unchecked(nu, a)?.0;
    }
    while a < limit {
        let b = (a + step).min(limit);
        let fb = j_and_derivative_unchecked(nu, b)?.0;
        if fb == T::zero() {
            return Ok(Some(b));
        }
        if (fa > T::zero()) != (fb > T::zero()) {
            let guess = mcmahon_guess(nu, index);
            return refine(nu, a, b, fa, Some(guess)).map(Some);
        }
        a = b;
        fa = fb;
    }
    Ok(None)
}

/// All positive zeros of J_ν not exceeding `limit`, ascending.
pub fn bessel_zeros_below<T: Real>(order: T, limit: T) -> Result<Vec<T>> {
    super::check_finite("order", order)?;
    super::check_finite("limit", limit)?;
    if order < T::zero() {
        return Err(Error::domain(format!(
            "Bessel order must be >= 0, got {order}"
        )));
    }
    let mut zeros = Vec::new();
    let mut start = order;
    while start < limit {
        match next_zero(order, start, limit, zeros.len() + 1)? {
            Some(z) => {
                zeros.push(z);
                start = z + T::lit(MIN_GAP);
            }
            None => break,
        }
    }
    Ok(zeros)
}

/// The n-th positive zero j_{ν,n} of J_ν (n ≥ 1).
pub fn bessel_zero<T: Real>(order: T, n: usize) -> Result<T> {
    super::check_finite("order", order)?;
    if order < T::zero() {
        return Err(Error::domain(format!(
            "Bessel order must be >= 0, got {order}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("zero index n must be >= 1"));
    }
    let mut start = order;
    let mut last = T::zero();
    for k in 1..=n {
        last = next_zero(order, start, T::infinity(), k)?
            .ok_or_else(|| Error::NonConvergence(format!("zero {k} of J_{order}")))?;
        start = last + T::lit(MIN_GAP);
    }
    Ok(last)
}
