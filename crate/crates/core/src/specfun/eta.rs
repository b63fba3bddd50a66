//! Dedekind eta on the imaginary axis, η(iy) = e^{-πy/12} ∏_{n≥1} (1 - e^{-2πny}).

use super::SpecialValue;
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Real};

/// Truncation target for the tail of log ∏(1 - qⁿ).
const TAIL_TARGET: f64 = 1e-16;

/// log η(iy) by the truncated q-product, with a bound on the neglected tail.
///
/// The product is evaluated directly for every y (no modular
/// transformation), so the modular identity is an independent check.
pub fn log_dedekind_eta<T: Real>(y: T) -> Result<SpecialValue<T>> {
    super::check_finite("y", y)?;
    if y <= T::zero() {
        return Err(Error::domain(format!(
            "dedekind_eta requires y > 0, got {y}"
        )));
    }
    let two_pi_y = T::two() * T::PI() * y;
    let q = (-two_pi_y).exp();
    // |Σ_{n>N} log(1 - qⁿ)| ≤ q^{N+1} / ((1 - q)(1 - q^{N+1})).
    let one_minus_q = -(-two_pi_y).exp_m1();
    let mut terms = Vec::new();
    let mut n = 1usize;
    let mut qn = q;
    let tail = loop {
        terms.push((-qn).ln_1p());
        let next = qn * q;
        let bound = next / (one_minus_q * (T::one() - next));
        // Stop once the tail is negligible and 2πNy exceeds 40.
        if bound <= T::lit(TAIL_TARGET) && two_pi_y * T::from_usize_lossy(n) > T::lit(40.0) {
            break bound;
        }
        n += 1;
        qn = next;
    };
    let log_prod = compensated_sum(terms.iter().rev().copied());
    let value = -T::PI() * y / T::lit(12.0) + log_prod;
    let rounding = T::epsilon() * (value.abs() + T::from_usize_lossy(terms.len()) * T::epsilon());
    Ok(SpecialValue::new(value, tail + rounding))
}

/// η(iy) for y > 0.
pub fn dedekind_eta<T: Real>(y: T) -> Result<SpecialValue<T>> {
    let log = log_dedekind_eta(y)?;
    let value = log.value.exp();
    // d(e^l) = e^l dl
    let err = value * log.absolute_error_bound + T::epsilon() * value;
    Ok(SpecialValue::new(value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_fn;
    use std::f64::consts::PI;

    #[test]
    fn value_at_i() {
        let eta = dedekind_eta(1.0_f64).unwrap();
        assert!((eta.value - 0.768_225_4).abs() < 1e-6);
        let closed = gamma_fn(0.25_f64).unwrap() / (2.0 * PI.powf(0.75));
        assert!((eta.value - closed).abs() < 1e-14);
        assert!(eta.absolute_error_bound < 1e-14);
    }

    #[test]
    fn modular_identity_spot_values() {
        for &y in &[0.5_f64, 2.0, 5.0, 3.0] {
            let lhs = log_dedekind_eta(1.0 / y).unwrap().value - log_dedekind_eta(y).unwrap().value;
            assert!((lhs - 0.5 * y.ln()).abs() < 1e-10, "y={y}");
        }
    }

    #[test]
    fn single_factor_regime() {
        let eta = dedekind_eta(10.0_f64).unwrap().value;
        let leading = (-10.0 * PI / 12.0).exp();
        assert!((eta / leading - 1.0).abs() < 1e-8);
    }

    #[test]
    fn domain_errors() {
        assert!(dedekind_eta(0.0_f64).is_err());
        assert!(dedekind_eta(-1.0_f64).is_err());
    }
}
