//! Bessel function of the first kind J_ν(x), real ν ≥ 0 and x ≥ 0.
//!
//! Two regimes:
//! * x ≤ 2√(ν+1): ascending power series. Terms shrink at least like 1/k, so
//!   cancellation costs at most a factor e.
//! * otherwise (x ≥ 2 automatically): Steed's method. CF1 gives J'_ν/J_ν,
//!   downward recurrence (stable for J) carries the ratio to μ = ν - nl near
//!   x, the complex continued fraction CF2 yields p + iq at μ, and the
//!   Wronskian fixes the normalization.

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 1_000_000;
const RESCALE: f64 = 1e200;

fn series<T: Real>(nu: T, x: T) -> (T, T) {
    if x == T::zero() {
        let j = if nu == T::zero() { T::one() } else { T::zero() };
        let dj = if nu == T::one() {
            T::half()
        } else if nu > T::zero() && nu < T::one() {
            T::infinity()
        } else {
            T::zero()
        };
        return (j, dj);
    }
    let half_x = x * T::half();
    let log_pref = nu * half_x.ln() - ln_gamma_unchecked(nu + T::one());
    let pref = log_pref.exp();
    let q = -half_x * half_x;
    // J_ν = pref Σ q^k / (k! (ν+1)_k); x J'_ν = pref Σ (ν + 2k) q^k / (k! (ν+1)_k).
    let mut term = T::one();
    let mut sum = T::one();
    let mut dsum = nu;
    let mut k = 0usize;
    loop {
        k += 1;
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * (nu + kf));
        sum += term;
        dsum += term * (nu + T::two() * kf);
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.1) || k > 500 {
            break;
        }
    }
    (pref * sum, pref * dsum / x)
}

fn steed<T: Real>(nu: T, x: T) -> Result<(T, T)> {
    let eps = T::epsilon();
    let fpmin = T::lit(1e-30);
    let nl = {
        let v = (nu - x + T::lit(1.5)).floor();
        if v > T::zero() {
            v.to_usize().unwrap_or(0)
        } else {
            0
        }
    };
    let xmu = nu - T::from_usize_lossy(nl);
    let xi = x.recip();
    let xi2 = T::two() * xi;
    let w = xi2 / T::PI();

    // CF1: J'_ν / J_ν by modified Lentz.
    let mut isign = T::one();
    let mut h = nu * xi;
    if h < fpmin {
        h = fpmin;
    }
    let mut b = xi2 * nu;
    let mut d = T::zero();
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = b - c.recip();
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = d.recip();
        let del = c * d;
        h = del * h;
        if d < T::zero() {
            isign = -isign;
        }
        if (del - T::one()).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("CF1 for J_{nu}({x})")));
    }

    // Downward recurrence from ν to μ with unnormalized values.
    let mut rjl = isign * fpmin;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    let big = T::lit(RESCALE);
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > big {
            let s = big.recip();
            rjl *= s;
            rjpl *= s;
            rjl1 *= s;
            rjp1 *= s;
        }
    }
    if rjl == T::zero() {
        rjl = eps;
    }
    let f = rjpl / rjl;

    // CF2: p + iq at order μ.
    let mut a = T::lit(0.25) - xmu * xmu;
    let mut p = -T::half() * xi;
    let mut q = T::one();
    let br = T::two() * x;
    let mut bi = T::two();
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut converged = false;
    for i in 2..MAX_ITER {
        a += T::from_usize_lossy(2 * (i - 1));
        bi += T::two();
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < fpmin {
            dr = fpmin;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < fpmin {
            cr = fpmin;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - T::one()).abs() + dli.abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("CF2 for J_{nu}({x})")));
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < T::zero() {
        rjmu = -rjmu;
    }
    let scale = rjmu / rjl;
    Ok((rjl1 * scale, rjp1 * scale))
}

/// J_ν(x) and J'_ν(x) without argument checks.
pub(crate) fn j_and_derivative_unchecked<T: Real>(nu: T, x: T) -> Result<(T, T)> {
    if x <= T::two() * (nu + T::one()).sqrt() {
        Ok(series(nu, x))
    } else {
        steed(nu, x)
    }
}

fn check_args<T: Real>(nu: T, x: T) -> Result<()> {
    super::check_finite("order", nu)?;
    super::check_finite("x", x)?;
    if nu < T::zero() {
        return Err(Error::domain(format!(
            "Bessel order must be >= 0, got {nu}"
        )));
    }
    if x < T::zero() {
        return Err(Error::domain(format!(
            "Bessel argument must be >= 0, got {x}"
        )));
    }
    Ok(())
}

/// J_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_j<T: Real>(order: T, x: T) -> Result<T> {
    check_args(order, x)?;
    Ok(j_and_derivative_unchecked(order, x)?.0)
}

/// (J_ν(x), J'_ν(x)) for ν ≥ 0, x ≥ 0.
pub fn bessel_j_with_derivative<T: Real>(order: T, x: T) -> Result<(T, T)> {
    check_args(order, x)?;
    j_and_derivative_unchecked(order, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use std::f64::consts::PI;

    /// Bessel's integral, valid for integer order.
    fn j_integer_quadrature(n: u32, x: f64) -> f64 {
        let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
        integrate_adaptive(f, 0.0, PI, 1e-15, 1e-15).unwrap().value / PI
    }

    /// Schläfli's integral for real order ν ≥ 0.
    fn j_real_quadrature(nu: f64, x: f64) -> f64 {
        let a = integrate_adaptive(|t: f64| (nu * t - x * t.sin()).cos(), 0.0, PI, 1e-15, 1e-15)
            .unwrap()
            .value
            / PI;
        let upper = 60.0_f64.max(2.0 * (40.0 / x.max(1e-3)).ln().max(0.0) + 5.0);
        let tail = |t: f64| (-x * t.sinh() - nu * t).exp();
        let b = (integrate_adaptive(tail, 0.0, 1.0, 1e-16, 1e-15)
            .unwrap()
            .value
            + integrate_adaptive(tail, 1.0, upper, 1e-16, 1e-15)
                .unwrap()
                .value)
            * (nu * PI).sin()
            / PI;
        a - b
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(bessel_j(0.0_f64, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.5_f64, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn near_zero_of_j2() {
        assert!(bessel_j(2.0_f64, 5.135_622_3).unwrap().abs() < 1e-7);
    }

    #[test]
    fn derivative_identity_by_central_differences() {
        for &x in &[1.0_f64, 5.0, 20.0] {
            let h = 1e-5;
            let d = (bessel_j(0.0, x + h).unwrap() - bessel_j(0.0, x - h).unwrap()) / (2.0 * h);
            let j1 = bessel_j(1.0, x).unwrap();
            assert!((j1 + d).abs() < 1e-8, "x={x}: {j1} vs {}", -d);
        }
    }

    #[test]
    fn matches_integral_representations_at_spot_points() {
        let int_points: [(u32, f64); 10] = [
            (0, 0.5),
            (0, 7.3),
            (1, 12.0),
            (2, 33.0),
            (5, 4.0),
            (10, 60.0),
            (30, 25.0),
            (40, 41.0),
            (80, 200.0),
            (3, 900.0),
        ];
        for (n, x) in int_points {
            let oracle = j_integer_quadrature(n, x);
            let got = bessel_j(n as f64, x).unwrap();
            assert!(
                (got - oracle).abs() < 1e-12,
                "J_{n}({x}) = {got}, oracle {oracle}"
            );
        }
        let real_points: [(f64, f64); 10] = [
            (0.5, 3.0),
            (1.7, 0.8),
            (2.4, 15.0),
            (6.3, 9.0),
            (12.6, 40.0),
            (33.3, 30.0),
            (57.1, 120.0),
            (120.7, 150.0),
            (250.5, 300.0),
            (299.2, 318.0),
        ];
        for (nu, x) in real_points {
            let oracle = j_real_quadrature(nu, x);
            let got = bessel_j(nu, x).unwrap();
            assert!(
                (got - oracle).abs() < 1e-12,
                "J_{nu}({x}) = {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.3_f64, 2.0, 9.0, 70.0, 500.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - exact).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn large_order_small_argument_underflows_gracefully() {
        let v = bessel_j(300.0_f64, 40.0).unwrap();
        assert!(v.is_finite() && v.abs() < 1e-100);
        let v = bessel_j(1000.0_f64, 100.0).unwrap();
        assert!(v.is_finite() && v.abs() < 1e-200);
    }

    #[test]
    fn regime_boundary_is_continuous() {
        for &nu in &[0.0_f64, 3.3, 48.0, 200.0] {
            let xb = 2.0 * (nu + 1.0).sqrt();
            let a = bessel_j(nu, xb * (1.0 - 1e-15)).unwrap();
            let b = bessel_j(nu, xb * (1.0 + 1e-15)).unwrap();
            assert!((a - b).abs() < 1e-12, "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(-1.0_f64, 1.0).is_err());
        assert!(bessel_j(1.0_f64, -1.0).is_err());
        assert!(bessel_j(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn pure_function() {
        let a = bessel_j(17.25_f64, 31.5).unwrap();
        let b = bessel_j(17.25_f64, 31.5).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
