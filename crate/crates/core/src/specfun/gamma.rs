use crate::error::{Error, Result};
use crate::scalar::{Real, EULER_GAMMA_F64};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(z: T) -> T {
    let mut sum = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += T::lit(c) / (z + T::from_usize_lossy(i));
    }
    sum
}

fn gamma_unchecked<T: Real>(x: T) -> T {
    if x < T::half() {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range.
        return gamma_unchecked(x + T::one()) / x;
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G + 0.5);
    let sqrt_two_pi = (T::two() * T::PI()).sqrt();
    // t^(z + 1/2) split in two to delay overflow.
    let p = t.powf((z + T::half()) / T::two());
    sqrt_two_pi * p * (p * (-t).exp()) * lanczos_sum(z)
}

/// ln Γ(x) for x > 0.
pub(crate) fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    if x < T::half() {
        return ln_gamma_unchecked(x + T::one()) - x.ln();
    }
    if x > T::lit(15.0) {
        // Stirling series; the remainder after the x^-9 term is below 1e-17 here.
        let inv = x.recip();
        let inv2 = inv * inv;
        let series = inv
            * (T::lit(1.0 / 12.0)
                - inv2
                    * (T::lit(1.0 / 360.0)
                        - inv2
                            * (T::lit(1.0 / 1260.0)
                                - inv2 * (T::lit(1.0 / 1680.0) - inv2 * T::lit(1.0 / 1188.0)))));
        return (x - T::half()) * x.ln() - x + T::half() * (T::two() * T::PI()).ln() + series;
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G + 0.5);
    T::half() * (T::two() * T::PI()).ln() + (z + T::half()) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for 0 < x ≤ 171.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    super::check_finite("x", x)?;
    if x <= T::zero() {
        return Err(Error::domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    let g = gamma_unchecked(x);
    if !g.is_finite() {
        return Err(Error::domain(format!("gamma_fn({x}) overflows")));
    }
    Ok(g)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    super::check_finite("x", x)?;
    if x <= T::zero() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// The Euler–Mascheroni constant γ_e.
pub fn euler_gamma<T: Real>() -> T {
    T::lit(EULER_GAMMA_F64)
}
