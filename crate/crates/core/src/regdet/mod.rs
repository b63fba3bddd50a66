//! Heat traces, small-time asymptotic fits, and zeta-regularized
//! determinants from a [`SpectrumTable`](crate::spectra::SpectrumTable).

mod fit;
mod trace;
mod zeta;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::spectra::Domain;

pub use fit::{fit_finite_part, AsymptoticFit, FIT_CONDITION_LIMIT};
pub use trace::{heat_trace, heat_trace_samples, log_spaced, HeatTraceSamples, TraceSample};
pub use zeta::{scale_logdet, zeta_prime_zero, zeta_prime_zero_auto, DetResult, DetScheme};

/// Heat invariants of Tr e^{-tΔ} ~ a0/t + a1/√t + a2 + O(√t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HeatInvariants<T: Real> {
    pub a0: T,
    pub a1: T,
    pub a2: T,
}

/// Contribution (π² − θ²)/(24πθ) of a corner with interior angle θ to a2.
pub fn corner_coefficient<T: Real>(theta: T) -> T {
    let pi = T::PI();
    (pi * pi - theta * theta) / (T::lit(24.0) * pi * theta)
}

/// ζ(0) of the unit-radius sector of opening α in closed form,
/// α/12π + (π² − α²)/(24πα) + 1/8.
pub fn sector_zeta_zero<T: Real>(alpha: T) -> T {
    alpha / (T::lit(12.0) * T::PI()) + corner_coefficient(alpha) + T::lit(0.125)
}

/// a0 = A/4π, a1 = −P/(8√π), a2 = Σ_corners (π² − θ²)/(24πθ) + (1/12π)∫κ ds.
pub fn heat_invariants<T: Real>(domain: &Domain<T>) -> HeatInvariants<T> {
    let pi = T::PI();
    let a0 = domain.area() / (T::lit(4.0) * pi);
    let a1 = -domain.perimeter() / (T::lit(8.0) * pi.sqrt());
    let corners: T = domain.corners().into_iter().map(corner_coefficient).sum();
    let a2 = corners + domain.total_curvature() / (T::lit(12.0) * pi);
    HeatInvariants { a0, a1, a2 }
}
