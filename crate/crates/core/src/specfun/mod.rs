//! Special functions: Bessel J and scaled modified Bessel I of real
//! nonnegative order, zeros of J, the exponential integral E1, the Dedekind
//! eta function on the imaginary axis, and the Gamma function.
//!
//! Every routine is a pure function of its arguments. Domain violations are
//! reported as [`Error::Domain`](crate::Error::Domain); unchecked variants
//! used internally live next to the checked ones.

mod bessel_i;
mod bessel_j;
mod eta;
mod expint;
mod gamma;
mod zeros;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

pub use bessel_i::{bessel_i_scaled, g_function};
pub use bessel_j::{bessel_j, bessel_j_with_derivative};
pub use eta::{dedekind_eta, log_dedekind_eta};
pub use expint::{erfc, exp_e1, exp_e1_scaled};
pub use gamma::{euler_gamma, gamma_fn, ln_gamma};
pub use zeros::{bessel_zero, bessel_zeros_below, mcmahon_guess};

pub(crate) use bessel_i::{bessel_i_ratio_bound, i_scaled_unchecked};
pub(crate) use expint::e1_unchecked;

/// A function value together with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpecialValue<T: Real> {
    pub value: T,
    pub absolute_error_bound: T,
}

impl<T: Real> SpecialValue<T> {
    pub fn new(value: T, absolute_error_bound: T) -> Self {
        debug_assert!(absolute_error_bound >= T::zero());
        Self {
            value,
            absolute_error_bound,
        }
    }
}

pub(crate) fn check_finite<T: Real>(name: &str, x: T) -> crate::Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::domain(format!(
            "{name} must be finite, got {x}"
        )))
    }
}
