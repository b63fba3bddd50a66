//! Exponential integral E1 and the complementary error function.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 100_000;

/// e^x E1(x) for x > 0: power series below 1, Lentz continued fraction above.
fn e1_scaled_unchecked<T: Real>(x: T) -> T {
    let eps = T::epsilon();
    if x <= T::one() {
        // E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k k!)
        let mut sum = T::zero();
        let mut fact = T::one();
        for k in 1..200 {
            let kf = T::from_usize_lossy(k);
            fact = fact * (-x) / kf;
            let term = fact / kf;
            sum += term;
            if term.abs() < eps * sum.abs().max(eps) {
                break;
            }
        }
        let e1 = -super::euler_gamma::<T>() - x.ln() - sum;
        return e1 * x.exp();
    }
    let fpmin = T::min_positive_value() / eps;
    let mut b = x + T::one();
    let mut c = fpmin.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::from_usize_lossy(i);
        let an = -fi * fi;
        b += T::two();
        d = (an * d + b).recip();
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - T::one()).abs() < eps {
            break;
        }
    }
    h
}

pub(crate) fn e1_unchecked<T: Real>(x: T) -> T {
    e1_scaled_unchecked(x) * (-x).exp()
}

fn check_positive<T: Real>(x: T) -> Result<()> {
    super::check_finite("x", x)?;
    if x <= T::zero() {
        return Err(Error::domain(format!("E1 requires x > 0, got {x}")));
    }
    Ok(())
}

/// E1(x) = ∫_x^∞ e^{-s}/s ds for x > 0.
pub fn exp_e1<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(e1_unchecked(x))
}

/// e^x E1(x) for x > 0; finite for arguments where E1 itself underflows.
pub fn exp_e1_scaled<T: Real>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(e1_scaled_unchecked(x))
}

/// erfc(x) for real x.
pub fn erfc<T: Real>(x: T) -> T {
    if x < T::zero() {
        return T::two() - erfc(-x);
    }
    let sqrt_pi = T::PI().sqrt();
    if x < T::two() {
        // erf(x) = (2/√π) e^{-x²} Σ 2^n x^{2n+1} / (1·3···(2n+1)), all terms positive.
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for n in 1..500 {
            term = term * T::two() * x2 / T::from_usize_lossy(2 * n + 1);
            sum += term;
            if term < T::epsilon() * sum {
                break;
            }
        }
        return T::one() - T::two() / sqrt_pi * (-x2).exp() * sum;
    }
    // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let fpmin = T::lit(1e-300);
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..MAX_ITER {
        let an = T::from_usize_lossy(n) * T::half();
        d = x + an * d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = x + an / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = d.recip();
        let del = c * d;
        f *= del;
        if (del - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (sqrt_pi * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;

    #[test]
    fn e1_at_one_against_quadrature() {
        // ∫_1^∞ e^{-s}/s ds with s = 1 + v/(1-v).
        let f = |v: f64| {
            let s = 1.0 + v / (1.0 - v);
            let ds = 1.0 / ((1.0 - v) * (1.0 - v));
            if v >= 1.0 {
                0.0
            } else {
                (-s).exp() / s * ds
            }
        };
        let oracle = integrate_adaptive(f, 0.0, 1.0, 1e-15, 1e-14).unwrap().value;
        let got = exp_e1(1.0_f64).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 0.219_383_9).abs() < 1e-6);
    }

    #[test]
    fn two_sided_bound() {
        for &x in &[0.5_f64, 1.0, 5.0, 25.0, 1e-3, 0.999, 1.001, 300.0] {
            let s = x * exp_e1_scaled(x).unwrap();
            assert!(x / (x + 1.0) < s && s < (x + 1.0) / (x + 2.0), "x={x}: {s}");
        }
    }

    #[test]
    fn dominant_balance_at_large_argument() {
        let x = 1e4_f64;
        assert!((x * exp_e1_scaled(x).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn continuity_at_branch_point() {
        let a = exp_e1(1.0_f64 - 1e-12).unwrap();
        let b = exp_e1(1.0_f64 + 1e-12).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(exp_e1(0.0_f64).is_err());
        assert!(exp_e1(-2.0_f64).is_err());
    }

    #[test]
    fn erfc_values() {
        assert!((erfc(0.0_f64) - 1.0).abs() < 1e-16);
        assert!((erfc(0.5_f64) - 0.479_500_122_186_953_5).abs() < 1e-15);
        assert!((erfc(2.0_f64 - 1e-12) - erfc(2.0_f64 + 1e-12)).abs() < 1e-13);
        assert!((erfc(2.0_f64) - 4.677_734_981_047_266e-3).abs() < 1e-16);
        assert!((erfc(3.0_f64) - 2.209_049_699_858_544e-5).abs() < 1e-18);
        assert!((erfc(-1.0_f64) - 1.842_700_792_949_715).abs() < 1e-15);
    }
}
