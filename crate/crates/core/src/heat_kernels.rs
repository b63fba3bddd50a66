//! Dirichlet heat kernels: half-line, quadrant, half-plane (closed forms by
//! images) and the infinite wedge of opening θ as a modified Bessel series.
//!
//! The wedge diagonal is
//!
//! ```text
//! H_θ(t; r, φ) = (1/(θt)) Σ_{k≥1} e^{-z} I_{kπ/θ}(z) sin²(kπφ/θ),   z = r²/2t,
//! ```
//!
//! always evaluated with scaled Bessel values so that z up to 1e7 is safe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::{bessel_i_ratio_bound, i_scaled_unchecked};

/// Cap on the number of series terms before giving up.
const MAX_TERMS: usize = 2_000_000;

/// Series truncation control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// Sum until the tail bound is below `1e-12 · value` or `1e-16`.
    Auto,
    /// Sum exactly this many terms.
    Terms(usize),
}

/// Diagonal value of a wedge heat kernel with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DiagonalKernelValue<T: Real> {
    pub t: T,
    pub r: T,
    pub phi: T,
    pub value: T,
    pub truncation_bound: T,
    pub terms: usize,
}

/// A truncated nonnegative series with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SeriesValue<T: Real> {
    pub value: T,
    pub truncation_bound: T,
    pub terms: usize,
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!(
            "heat time must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

fn check_angle<T: Real>(theta: T) -> Result<()> {
    if !(theta > T::zero() && theta <= T::PI()) {
        return Err(Error::domain(format!(
            "wedge angle must lie in (0, π], got {theta}"
        )));
    }
    Ok(())
}

/// Dirichlet heat kernel of the half-line [0, ∞).
pub fn halfline_kernel<T: Real>(t: T, x1: T, x2: T) -> Result<T> {
    check_time(t)?;
    if x1 < T::zero() || x2 < T::zero() {
        return Err(Error::domain("half-line kernel needs x1, x2 >= 0"));
    }
    let four_t = T::lit(4.0) * t;
    let pref = (T::PI() * four_t).sqrt().recip();
    // e^{-a} - e^{-b} = e^{-a}(1 - e^{-(b-a)}) with b - a = x1 x2 / t.
    let d = x1 - x2;
    let lead = (-(d * d) / four_t).exp();
    Ok(pref * lead * -(-(x1 * x2) / t).exp_m1())
}

/// Quadrant kernel in Cartesian form, the product of two half-line kernels.
pub fn quadrant_kernel<T: Real>(t: T, p: (T, T), q: (T, T)) -> Result<T> {
    Ok(halfline_kernel(t, p.0, q.0)? * halfline_kernel(t, p.1, q.1)?)
}

/// Diagonal of the quadrant kernel in polar coordinates.
pub fn quadrant_diag<T: Real>(t: T, r: T, phi: T) -> Result<T> {
    check_time(t)?;
    if r < T::zero() || !(phi >= T::zero() && phi <= T::FRAC_PI_2()) {
        return Err(Error::domain(format!(
            "quadrant_diag needs r >= 0 and phi in [0, π/2], got ({r}, {phi})"
        )));
    }
    let z = r * r / (T::two() * t);
    let c = (T::two() * phi).cos();
    let pref = (T::lit(4.0) * T::PI() * t).recip();
    // 1 + e^{-2z} - e^{-z(1-c)} - e^{-z(1+c)} = (1 - e^{-z(1-c)})(1 - e^{-z(1+c)})
    let a = -(-z * (T::one() - c)).exp_m1();
    let b = -(-z * (T::one() + c)).exp_m1();
    Ok(pref * a * b)
}

/// Diagonal of the half-plane kernel, (1/4πt)(1 − e^{-r²(1−cos 2φ)/2t}).
pub fn halfplane_diag<T: Real>(t: T, r: T, phi: T) -> Result<T> {
    check_time(t)?;
    if r < T::zero() || !(phi >= T::zero() && phi <= T::PI()) {
        return Err(Error::domain(
            "halfplane_diag needs r >= 0 and phi in [0, π]",
        ));
    }
    let z = r * r / (T::two() * t);
    let s = phi.sin();
    Ok(-(-T::two() * z * s * s).exp_m1() / (T::lit(4.0) * T::PI() * t))
}

/// Sums Σ_{k≥1} w_k e^{-z} I_{kp}(z) with weights 0 ≤ w_k ≤ 1.
///
/// The tail after term K is bounded with the ratio bound
/// I_{ν+1}/I_ν ≤ ρ(ν) and monotonicity of I_ν in ν, so successive terms
/// shrink by at least q = ρ(Kp)^{⌊p⌋} and the tail is ≤ term_K q/(1−q).
/// `done(sum, bound)` decides when the auto mode stops.
fn bessel_series<T, W, D>(
    p: T,
    z: T,
    truncation: Truncation,
    weight: W,
    done: D,
) -> Result<SeriesValue<T>>
where
    T: Real,
    W: Fn(usize) -> T,
    D: Fn(T, T) -> bool,
{
    if z == T::zero() {
        return Ok(SeriesValue {
            value: T::zero(),
            truncation_bound: T::zero(),
            terms: 0,
        });
    }
    let step = p.floor().max(T::one());
    let mut acc = CompensatedSum::new();
    let limit = match truncation {
        Truncation::Auto => MAX_TERMS,
        Truncation::Terms(k) => k,
    };
    let mut bound = T::infinity();
    let mut k = 0usize;
    while k < limit {
        k += 1;
        let nu = p * T::from_usize_lossy(k);
        let term = i_scaled_unchecked(nu, z)?;
        acc.add(term * weight(k));
        let q = bessel_i_ratio_bound(nu, z).powf(step);
        bound = if q < T::one() {
            term * q / (T::one() - q)
        } else {
            T::infinity()
        };
        if matches!(truncation, Truncation::Auto) && done(acc.value(), bound) {
            return Ok(SeriesValue {
                value: acc.value(),
                truncation_bound: bound,
                terms: k,
            });
        }
    }
    if matches!(truncation, Truncation::Auto) {
        return Err(Error::NonConvergence(format!(
            "wedge Bessel series at order step {p}, z = {z} did not reach its tolerance"
        )));
    }
    Ok(SeriesValue {
        value: acc.value(),
        truncation_bound: if k == 0 { T::infinity() } else { bound },
        terms: k,
    })
}

/// Diagonal of the Dirichlet heat kernel on the infinite wedge of opening
/// `theta` ∈ (0, π], by the eigenfunction series.
pub fn sector_diag_series<T: Real>(
    theta: T,
    t: T,
    r: T,
    phi: T,
    truncation: Truncation,
) -> Result<DiagonalKernelValue<T>> {
    check_angle(theta)?;
    check_time(t)?;
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be >= 0, got {r}")));
    }
    if !(phi >= T::zero() && phi <= theta) {
        return Err(Error::domain(format!("phi must lie in [0, θ], got {phi}")));
    }
    if let Truncation::Terms(0) = truncation {
        return Err(Error::domain("at least one series term is required"));
    }
    let pref = (theta * t).recip();
    if phi == T::zero() || phi == theta {
        return Ok(DiagonalKernelValue {
            t,
            r,
            phi,
            value: T::zero(),
            truncation_bound: T::zero(),
            terms: 0,
        });
    }
    let p = T::PI() / theta;
    let z = r * r / (T::two() * t);
    let frac = phi / theta;
    let weight = |k: usize| {
        let s = (T::PI() * frac * T::from_usize_lossy(k)).sin();
        s * s
    };
    let abs_floor = T::lit(1e-16);
    let series = bessel_series(p, z, truncation, weight, |sum, bound| {
        let (v, b) = (pref * sum, pref * bound);
        b < T::lit(1e-12) * v || b < abs_floor
    })?;
    Ok(DiagonalKernelValue {
        t,
        r,
        phi,
        value: pref * series.value,
        truncation_bound: pref * series.truncation_bound,
        terms: series.terms,
    })
}

/// S_θ(z) = Σ_{k≥1} e^{-z} I_{kπ/θ}(z).
///
/// This is the angular integral of the wedge diagonal: for r² = 2tz,
/// ∫_0^θ H_θ(t; r, φ) dφ = S_θ(z)/(2t). Auto truncation stops at a relative
/// tail of 1e-15 or an absolute tail of 1e-300.
pub fn sector_radial_sum<T: Real>(
    theta: T,
    z: T,
    truncation: Truncation,
) -> Result<SeriesValue<T>> {
    check_angle(theta)?;
    if !(z >= T::zero()) || !z.is_finite() {
        return Err(Error::domain(format!("z must be finite and >= 0, got {z}")));
    }
    let p = T::PI() / theta;
    let rel = T::lit(1e-15);
    let tiny = T::min_positive_value();
    bessel_series(
        p,
        z,
        truncation,
        |_| T::one(),
        |sum, bound| bound <= rel * sum || bound <= tiny,
    )
}
