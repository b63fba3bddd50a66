//! Zeta-regularized determinants of Dirichlet Laplacians on circular sectors
//! and rectangles, corner contributions to the variational Polyakov formula,
//! and the eta-function closed forms for rectangles.
//!
//! Numerical code is generic over [`Real`] (implemented for `f32` and
//! `f64`); the `*64` aliases below fix the scalar to `f64`.

// `!(x > 0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes are kept at their published precision.
#![allow(clippy::excessive_precision)]
// Index loops follow the matrix notation.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod heat_kernels;
pub mod linalg;
pub mod polyakov;
pub mod quadrature;
pub mod rect_eta;
pub mod regdet;
pub mod scalar;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::{compensated_sum, CompensatedSum, Real, EULER_GAMMA_F64};

pub type SpecialValue64 = specfun::SpecialValue<f64>;
pub type DiagonalKernelValue64 = heat_kernels::DiagonalKernelValue<f64>;
pub type SectorGeometry64 = spectra::SectorGeometry<f64>;
pub type RectangleGeometry64 = spectra::RectangleGeometry<f64>;
pub type Domain64 = spectra::Domain<f64>;
pub type SpectrumTable64 = spectra::SpectrumTable<f64>;
pub type AsymptoticFit64 = regdet::AsymptoticFit<f64>;
pub type HeatTraceSamples64 = regdet::HeatTraceSamples<f64>;
pub type DetScheme64 = regdet::DetScheme<f64>;
pub type DetResult64 = regdet::DetResult<f64>;
pub type CornerContribution64 = polyakov::CornerContribution<f64>;
pub type VariationReport64 = polyakov::VariationReport<f64>;
pub type FdCheck64 = polyakov::FdCheck<f64>;
pub type RectDetReport64 = rect_eta::RectDetReport<f64>;
pub type RectMaxResult64 = rect_eta::RectMaxResult<f64>;
