//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating point type the library is generic over (`f32` or `f64`).
///
/// The numerical contracts of the crate (tolerances such as `1e-12`) are
/// stated for `f64`; `f32` instantiations compile and run but only meet
/// single-precision accuracy.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euler–Mascheroni constant to full `f64` precision.
pub const EULER_GAMMA_F64: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_4;

/// Kahan–Babuška (Neumaier) compensated accumulator.
///
/// Summation order is whatever order values are pushed; results are
/// therefore reproducible as long as the caller's order is.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T: Real> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<CompensatedSum<T>>().value()
}
