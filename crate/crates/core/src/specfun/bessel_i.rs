//! Exponentially scaled modified Bessel function e^{-x} I_ν(x).
//!
//! The unscaled I_ν is never formed. Regimes, tried in order:
//! * x ≤ 2√(ν+1): power series with the prefactor assembled in log space;
//! * ν ≥ 60: Debye's uniform expansion through u_9 (remainder ~ ν^{-10});
//! * x ≥ max(1000, 25ν²): Hankel's large-argument expansion;
//! * otherwise: CF1 for I'_ν/I_ν, rescaled downward recurrence to |μ| ≤ 1/2,
//!   Steed's CF2 for the scaled K_μ, and the Wronskian.

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 1_000_000;
const DEBYE_MIN_ORDER: f64 = 60.0;

// Debye polynomials u_k(t) = t^k Σ_j c_{k,j} t^{2j}, generated from
// u_{k+1} = t²(1-t²)u_k'/2 + (1/8)∫_0^t (1-5s²) u_k(s) ds.
const U1: [f64; 2] = [0.125, -0.208_333_333_333_333_34];
const U2: [f64; 3] = [
    0.070_312_5,
    -0.401_041_666_666_666_7,
    0.334_201_388_888_888_9,
];
const U3: [f64; 4] = [
    0.073_242_187_5,
    -0.891_210_937_5,
    1.846_462_673_611_111_2,
    -1.025_812_596_450_617_3,
];
const U4: [f64; 5] = [
    0.112_152_099_609_375,
    -2.364_086_914_062_5,
    8.789_123_535_156_25,
    -11.207_002_616_222_994,
    4.669_584_423_426_247,
];
const U5: [f64; 6] = [
    0.227_108_001_708_984_38,
    -7.368_794_359_479_632,
    42.534_998_745_388_46,
    -91.818_241_543_240_02,
    84.636_217_674_600_73,
    -28.212_072_558_200_244,
];
const U6: [f64; 7] = [
    0.572_501_420_974_731_4,
    -26.491_430_486_951_554,
    218.190_511_744_211_6,
    -699.579_627_376_132_5,
    1_059.990_452_527_999_9,
    -765.252_468_141_181_7,
    212.570_130_039_217_13,
];
const U7: [f64; 8] = [
    1.727_727_502_584_457_4,
    -108.090_919_788_394_66,
    1_200.902_913_216_352_5,
    -5_305.646_978_613_403,
    11_655.393_336_864_534,
    -13_586.550_006_434_138,
    8_061.722_181_737_309,
    -1_919.457_662_318_407,
];
const U8: [f64; 9] = [
    6.074_042_001_273_483,
    -493.915_304_773_088,
    7_109.514_302_489_364,
    -41_192.654_968_897_55,
    122_200.464_983_017_46,
    -203_400.177_280_415_55,
    192_547.001_232_531_53,
    -96_980.598_388_637_52,
    20_204.291_330_966_15,
];
const U9: [f64; 10] = [
    24.380_529_699_556_064,
    -2_499.830_481_811_209_7,
    45_218.768_981_362_73,
    -331_645.172_484_563_6,
    1_268_365.273_321_624_8,
    -2_813_563.226_586_534,
    3_763_271.297_656_404,
    -2_998_015.918_538_106_6,
    1_311_763.614_662_977_2,
    -242_919.187_900_551_33,
];

fn poly_even<T: Real>(coeffs: &[f64], t2: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * t2 + T::lit(c))
}

fn series<T: Real>(nu: T, x: T) -> T {
    if x == T::zero() {
        return if nu == T::zero() { T::one() } else { T::zero() };
    }
    let half_x = x * T::half();
    let log_pref = nu * half_x.ln() - ln_gamma_unchecked(nu + T::one()) - x;
    let q = half_x * half_x;
    let mut term = T::one();
    let mut sum = T::one();
    let mut k = 0usize;
    loop {
        k += 1;
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * (nu + kf));
        sum += term;
        if term <= T::epsilon() * sum * T::lit(0.1) || k > 1000 {
            break;
        }
    }
    (log_pref + sum.ln()).exp()
}

fn debye<T: Real>(nu: T, x: T) -> T {
    let z = x / nu;
    let root = (T::one() + z * z).sqrt();
    let t = root.recip();
    let t2 = t * t;
    // ν η - x with η = √(1+z²) + ln(z / (1 + √(1+z²))), arranged to avoid
    // cancellation when x ≫ ν.
    let exponent = nu * nu / ((nu * nu + x * x).sqrt() + x) - nu * (nu / x).asinh();
    let inv_nu = nu.recip();
    let tables: [&[f64]; 9] = [&U1, &U2, &U3, &U4, &U5, &U6, &U7, &U8, &U9];
    let mut sum = T::one();
    let mut tk = T::one();
    let mut nk = T::one();
    for coeffs in tables {
        tk *= t;
        nk *= inv_nu;
        sum += tk * poly_even(coeffs, t2) * nk;
    }
    exponent.exp() / ((T::two() * T::PI() * nu).sqrt() * root.sqrt()) * sum
}

fn hankel<T: Real>(nu: T, x: T) -> T {
    let mu = T::lit(4.0) * nu * nu;
    let mut term = T::one();
    let mut sum = T::one();
    let mut prev = T::infinity();
    for k in 1..200 {
        let kf = T::from_usize_lossy(k);
        let odd = T::two() * kf - T::one();
        term = -term * (mu - odd * odd) / (kf * T::lit(8.0) * x);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.1) {
            break;
        }
    }
    sum / (T::two() * T::PI() * x).sqrt()
}

fn steed<T: Real>(nu: T, x: T) -> Result<T> {
    let eps = T::epsilon();
    let fpmin = T::lit(1e-30);
    let nl = (nu + T::half()).floor().to_usize().unwrap_or(0);
    let xmu = nu - T::from_usize_lossy(nl);
    let xmu2 = xmu * xmu;
    let xi = x.recip();
    let xi2 = T::two() * xi;

    // CF1: I'_ν / I_ν.
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
        d = (b + d).recip();
        c = b + c.recip();
        let del = c * d;
        h = del * h;
        if (del - T::one()).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("CF1 for I_{nu}({x})")));
    }

    let mut ril = fpmin;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut fact = nu * xi;
    let big = T::lit(1e200);
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril > big {
            let s = big.recip();
            ril *= s;
            ripl *= s;
            ril1 *= s;
        }
    }
    let f = ripl / ril;

    // CF2 (Steed) for e^x K_μ and e^x K_{μ+1}.
    let mut b = T::two() * (T::one() + x);
    let mut d = b.recip();
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = T::lit(0.25) - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let fi = T::from_usize_lossy(i);
        a -= T::from_usize_lossy(2 * (i - 1));
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += T::two();
        d = (b + a * d).recip();
        delh = (b * d - T::one()) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("CF2 for I_{nu}({x})")));
    }
    h = a1 * h;
    let rkmu = (T::PI() / (T::two() * x)).sqrt() / s;
    let rk1 = rkmu * (xmu + x + T::half() - h) * xi;
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    Ok(rimu * ril1 / ril)
}

/// e^{-x} I_ν(x) without argument checks.
pub(crate) fn i_scaled_unchecked<T: Real>(nu: T, x: T) -> Result<T> {
    if x <= T::two() * (nu + T::one()).sqrt() {
        Ok(series(nu, x))
    } else if nu >= T::lit(DEBYE_MIN_ORDER) {
        Ok(debye(nu, x))
    } else if x >= T::lit(1000.0).max(T::lit(25.0) * nu * nu) {
        Ok(hankel(nu, x))
    } else {
        steed(nu, x)
    }
}

/// Upper bound on I_{ν+1}(x)/I_ν(x) valid for ν ≥ 0, x > 0.
pub(crate) fn bessel_i_ratio_bound<T: Real>(nu: T, x: T) -> T {
    x / (nu + (nu * nu + x * x).sqrt())
}

/// e^{-x} I_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_i_scaled<T: Real>(order: T, x: T) -> Result<T> {
    super::check_finite("order", order)?;
    super::check_finite("x", x)?;
    if order < T::zero() || x < T::zero() {
        return Err(Error::domain(format!(
            "bessel_i_scaled requires order >= 0 and x >= 0, got ({order}, {x})"
        )));
    }
    i_scaled_unchecked(order, x)
}

/// g(u) = e^{-u} u (I_0(u) + I_1(u)), an antiderivative of e^{-u} I_0(u)
/// with g(0) = 0.
pub fn g_function<T: Real>(u: T) -> Result<T> {
    super::check_finite("u", u)?;
    if u < T::zero() {
        return Err(Error::domain(format!(
            "g_function requires u >= 0, got {u}"
        )));
    }
    Ok(u * (i_scaled_unchecked(T::zero(), u)? + i_scaled_unchecked(T::one(), u)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use std::f64::consts::PI;

    /// (1/π)∫_0^π e^{x(cos φ - 1)} cos(νφ) dφ - (sin νπ/π)∫_0^∞ e^{-x(1 + cosh t) - νt} dt.
    fn scaled_i_quadrature(nu: f64, x: f64) -> f64 {
        let a = integrate_adaptive(
            |p: f64| (x * (p.cos() - 1.0)).exp() * (nu * p).cos(),
            0.0,
            PI,
            1e-16,
            1e-15,
        )
        .unwrap()
        .value
            / PI;
        let s = (nu * PI).sin();
        if s == 0.0 {
            return a;
        }
        let b = integrate_adaptive(
            |t: f64| (-x * (1.0 + t.cosh()) - nu * t).exp(),
            0.0,
            40.0,
            1e-16,
            1e-15,
        )
        .unwrap()
        .value;
        a - s / PI * b
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i_scaled(0.0_f64, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i_scaled(1.0_f64, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(3.7_f64, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn order_zero_at_fifty_against_integral_representation() {
        let oracle = integrate_adaptive(
            |p: f64| (50.0 * (p.cos() - 1.0)).exp(),
            0.0,
            PI,
            1e-16,
            1e-15,
        )
        .unwrap()
        .value
            / PI;
        let got = bessel_i_scaled(0.0_f64, 50.0).unwrap();
        assert!((got - oracle).abs() < 1e-9);
        let leading = 1.0 / (100.0 * PI).sqrt() * (1.0 + 1.0 / 400.0);
        assert!((got - leading).abs() < 1e-5);
    }

    #[test]
    fn every_regime_matches_quadrature() {
        let pts: [(f64, f64); 14] = [
            (0.0, 0.3),
            (0.5, 1.5),
            (1.0, 3.0),
            (2.0, 10.0),
            (1.5, 40.0),
            (4.0, 120.0),
            (0.0, 700.0),
            (12.5, 300.0),
            (59.0, 200.0),
            (61.0, 200.0),
            (75.3, 20.0),
            (150.0, 900.0),
            (400.0, 5000.0),
            (3.0, 2000.0),
        ];
        for (nu, x) in pts {
            let oracle = scaled_i_quadrature(nu, x);
            let got = bessel_i_scaled(nu, x).unwrap();
            let tol = 1e-13 * oracle.abs().max(1e-3);
            assert!((got - oracle).abs() < tol, "I_{nu}({x}): {got} vs {oracle}");
        }
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.2_f64, 2.0, 30.0, 400.0, 5000.0] {
            let exact = (1.0 - (-2.0 * x).exp()) / (2.0 * PI * x).sqrt();
            let got = bessel_i_scaled(0.5, x).unwrap();
            assert!((got - exact).abs() < 1e-14 * exact.max(1e-300), "x={x}");
        }
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        let cases: [(f64, f64); 4] = [
            (59.999_999, 300.0),
            (10.0, 2.0 * 11.0_f64.sqrt()),
            (5.0, 1000.0),
            (6.0, 1000.0),
        ];
        for (nu, x) in cases {
            let a = bessel_i_scaled(nu, x * (1.0 - 1e-15)).unwrap();
            let b = bessel_i_scaled(nu, x * (1.0 + 1e-15)).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs(), "({nu},{x}): {a} vs {b}");
        }
        let a = bessel_i_scaled(59.999_999_f64, 300.0).unwrap();
        let b = bessel_i_scaled(60.0_f64, 300.0).unwrap();
        assert!((a - b).abs() < 1e-6 * a);
    }

    #[test]
    fn huge_arguments_stay_finite() {
        for &x in &[1e5_f64, 1e6, 1e7] {
            let v = bessel_i_scaled(0.0, x).unwrap();
            let leading = 1.0 / (2.0 * PI * x).sqrt();
            assert!((v / leading - 1.0).abs() < 1e-5);
            let w = bessel_i_scaled(3000.0, x).unwrap();
            assert!(w.is_finite() && w > 0.0 && w < v);
        }
    }

    #[test]
    fn monotone_decay_in_order() {
        for &x in &[0.5_f64, 5.0, 80.0, 2500.0] {
            let mut prev = f64::INFINITY;
            for k in 0..200 {
                let v = bessel_i_scaled(0.37 * k as f64, x).unwrap();
                assert!(v <= prev, "x={x}, k={k}");
                prev = v;
            }
        }
    }

    #[test]
    fn recurrence_identities_by_central_differences() {
        let h = 1e-5;
        let i = |nu: f64, u: f64| bessel_i_scaled(nu, u).unwrap() * u.exp();
        for &u in &[0.5_f64, 1.0, 5.0, 20.0] {
            let d1 = (i(1.0, u + h) - i(1.0, u - h)) / (2.0 * h);
            let d0 = (i(0.0, u + h) - i(0.0, u - h)) / (2.0 * h);
            let scale = u.exp().max(1.0);
            assert!(
                (u * d1 + i(1.0, u) - u * i(0.0, u)).abs() / scale < 1e-6,
                "u={u}"
            );
            assert!((u * d0 - u * i(1.0, u)).abs() / scale < 1e-6, "u={u}");
        }
    }

    #[test]
    fn ratio_bound_holds() {
        for &x in &[0.1_f64, 3.0, 50.0, 4000.0] {
            for k in 0..50 {
                let nu = 1.3 * k as f64;
                let a = bessel_i_scaled(nu, x).unwrap();
                let b = bessel_i_scaled(nu + 1.0, x).unwrap();
                if a > 1e-280 {
                    assert!(b / a <= bessel_i_ratio_bound(nu, x) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn g_function_properties() {
        assert_eq!(g_function(0.0_f64).unwrap(), 0.0);
        for &u in &[0.5_f64, 2.0, 10.0] {
            let h = 1e-5;
            let d = (g_function(u + h).unwrap() - g_function(u - h).unwrap()) / (2.0 * h);
            let target = bessel_i_scaled(0.0, u).unwrap();
            assert!((d - target).abs() < 1e-6, "u={u}");
        }
        let g = g_function(200.0_f64).unwrap();
        let asym = (400.0 / PI).sqrt() * (1.0 - 1.0 / 1600.0);
        assert!((g / asym - 1.0).abs() < 1e-4);
        assert!(g_function(-1.0_f64).is_err());
    }

    #[test]
    fn single_precision_instantiation() {
        let v = bessel_i_scaled(1.5_f32, 7.0).unwrap();
        let w = bessel_i_scaled(1.5_f64, 7.0).unwrap();
        assert!(((v as f64) - w).abs() < 1e-5);
    }
}
