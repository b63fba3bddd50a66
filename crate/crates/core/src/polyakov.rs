//! Corner contributions to the variation of log det under a change of the
//! opening angle, their assembly, and a finite-difference cross-check through
//! the spectral determinant pipeline.
//!
//! A corner of angle θ with weight w0 + wlog·log r contributes the Hadamard
//! finite part at t → 0 of
//!
//! I(t) = ∫_0^R ∫_0^θ (w0 + wlog log r) H_θ(t; r, φ) r dφ dr.
//!
//! The angular integral collapses to S_θ(z)/(2t) with z = r²/2t (see
//! [`sector_radial_sum`]), so with Z = R²/2t
//!
//! I(t) = ½[(w0 + ½wlog log 2t) F0(Z) + ½wlog F1(Z)],
//! F0(Z) = ∫_0^Z S_θ, F1(Z) = ∫_0^Z log z S_θ.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heat_kernels::{sector_radial_sum, Truncation};
use crate::quadrature::integrate_adaptive_vec;
use crate::rect_eta::{f_value, RectConvention};
use crate::regdet::{
    corner_coefficient, fit_finite_part, log_spaced, zeta_prime_zero_auto, AsymptoticFit, DetScheme,
};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::euler_gamma;
use crate::spectra::{sector_spectrum, SectorGeometry};

/// Number of points in the automatic t-grid.
pub const AUTO_TGRID_POINTS: usize = 24;
/// Tolerance on the deviation of the fitted log t coefficient from its
/// predicted value wlog·C_θ/2.
pub const LOG_COEFFICIENT_TOLERANCE: f64 = 1e-3;
/// Propagated per-point error above which a finite-difference stencil is
/// reported as under-resolved.
pub const UNDER_RESOLVED_LIMIT: f64 = 5e-3;

/// How a corner finite part was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerMethod {
    ClosedPi2,
    NumericSeries,
}

/// Finite part of one weighted corner integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CornerContribution<T: Real> {
    pub angle: T,
    pub w0: T,
    pub wlog: T,
    pub fp: T,
    pub method: CornerMethod,
    /// |fp − fp on the lower part of the grid|; zero for the closed form.
    pub uncertainty: T,
    /// Fitted coefficient of log t.
    pub log_coefficient: Option<T>,
    /// wlog·C_θ/2, the log t coefficient implied by the weight.
    pub expected_log_coefficient: T,
    pub radius: Option<T>,
    pub tgrid: Vec<T>,
    pub diagnostics: Option<AsymptoticFit<T>>,
}

impl<T: Real> CornerContribution<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_weights<T: Real>(w0: T, wlog: T) -> Result<()> {
    if !w0.is_finite() || !wlog.is_finite() {
        return Err(Error::domain("corner weights must be finite"));
    }
    Ok(())
}

/// Closed form at θ = π/2: w0/16 + wlog(−γ_e/16 − 1/8).
pub fn corner_fp_closed_pi2<T: Real>(w0: T, wlog: T) -> Result<CornerContribution<T>> {
    check_weights(w0, wlog)?;
    let sixteenth = T::lit(16.0).recip();
    let fp = w0 * sixteenth + wlog * (-euler_gamma::<T>() * sixteenth - T::lit(0.125));
    Ok(CornerContribution {
        angle: T::FRAC_PI_2(),
        w0,
        wlog,
        fp,
        method: CornerMethod::ClosedPi2,
        uncertainty: T::zero(),
        log_coefficient: None,
        expected_log_coefficient: wlog * sixteenth * T::half(),
        radius: None,
        tgrid: Vec::new(),
        diagnostics: None,
    })
}

/// Smallest 1 − cos(2πm/p) over the image directions of the wedge, or 2 when
/// there are none; sets how fast the kernel reaches its bulk value.
fn image_gap<T: Real>(theta: T) -> T {
    let p = T::PI() / theta;
    if p < T::one() {
        return T::two();
    }
    // m = 1 gives the nearest image; 2π/p ≤ π whenever p ≥ 2.
    let angle = T::two() * T::PI() / p;
    if angle > T::PI() {
        T::two()
    } else {
        T::one() - angle.cos()
    }
}

/// Default fitting grid: 24 log-spaced times in [1e-6, t_max] with
/// t_max = min(1e-3, R²/10, R²·κ/40), κ the image gap of the wedge.
///
/// The edge term of I(t) carries a t^{3/2} correction outside the fitted
/// basis, about 0.014·t^{3/2}; on [1e-4, 5e-2] it moves the finite part by
/// 1e-3, on [1e-6, 1e-3] by 3e-6.
pub fn auto_tgrid<T: Real>(theta: T, radius: T) -> Vec<T> {
    let r2 = radius * radius;
    let t_max = T::lit(1e-3)
        .min(r2 / T::lit(10.0))
        .min(r2 * image_gap(theta) / T::lit(40.0));
    log_spaced(T::lit(1e-6), t_max, AUTO_TGRID_POINTS)
}

fn check_corner_args<T: Real>(theta: T, radius: T, tgrid: &[T]) -> Result<()> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::domain(format!(
            "corner angle must lie in (0, π), got {theta}"
        )));
    }
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::domain(format!(
            "patch radius must be positive, got {radius}"
        )));
    }
    let limit = radius * radius / T::lit(10.0);
    if let Some(&bad) = tgrid.iter().find(|&&t| !(t > T::zero() && t < limit)) {
        return Err(Error::domain(format!(
            "t-grid value {bad} outside (0, R²/10) = (0, {limit})"
        )));
    }
    Ok(())
}

/// I(t) at every t of the grid, in grid order.
///
/// F0 and F1 are accumulated over panels between consecutive Z = R²/2t, so
/// the quadrature work is shared across the grid; panels run in parallel and
/// are summed in a fixed order.
pub fn corner_integral_samples<T: Real>(
    theta: T,
    w0: T,
    wlog: T,
    radius: T,
    tgrid: &[T],
) -> Result<Vec<(T, T)>> {
    check_weights(w0, wlog)?;
    check_corner_args(theta, radius, tgrid)?;
    let r2 = radius * radius;
    let mut order: Vec<usize> = (0..tgrid.len()).collect();
    // increasing Z = decreasing t
    order.sort_by(|&a, &b| {
        tgrid[b]
            .partial_cmp(&tgrid[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let zs: Vec<T> = order.iter().map(|&i| r2 / (T::two() * tgrid[i])).collect();
    let mut edges = Vec::with_capacity(zs.len() + 1);
    edges.push(T::zero());
    edges.extend(zs.iter().copied());
    let tol = T::lit(1e-13);
    let panels = edges
        .par_windows(2)
        .map(|w| {
            let integrand = |z: T| -> [T; 2] {
                match sector_radial_sum(theta, z, Truncation::Auto) {
                    Ok(s) if z > T::zero() => [s.value, z.ln() * s.value],
                    Ok(s) => [s.value, T::zero()],
                    Err(_) => [T::nan(), T::nan()],
                }
            };
            let r = integrate_adaptive_vec(integrand, w[0], w[1], tol, tol)?;
            if r.value.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonConvergence(format!(
                    "radial sum failed on [{}, {}]",
                    w[0], w[1]
                )));
            }
            Ok(r.value)
        })
        .collect::<Result<Vec<[T; 2]>>>()?;
    let mut f0 = CompensatedSum::new();
    let mut f1 = CompensatedSum::new();
    let mut out = vec![(T::zero(), T::zero()); tgrid.len()];
    for (k, &idx) in order.iter().enumerate() {
        f0.add(panels[k][0]);
        f1.add(panels[k][1]);
        let t = tgrid[idx];
        let weight = w0 + wlog * T::half() * (T::two() * t).ln();
        let value = T::half() * (weight * f0.value() + wlog * T::half() * f1.value());
        out[idx] = (t, value);
    }
    Ok(out)
}

/// Hadamard finite part of the weighted corner integral from the series
/// kernel, by fitting I(t) to t^{-1}, t^{-1/2}, 1, t^{1/2}, t and log t.
///
/// The log t coefficient is checked against wlog·C_θ/2 (C_θ the corner
/// coefficient); a deviation above [`LOG_COEFFICIENT_TOLERANCE`] is a
/// quality error. The returned fp is the Mellin finite part c0 − γ_e b.
pub fn corner_fp_numeric<T: Real>(
    theta: T,
    w0: T,
    wlog: T,
    radius: T,
    tgrid: Option<&[T]>,
) -> Result<CornerContribution<T>> {
    let grid: Vec<T> = match tgrid {
        Some(g) => g.to_vec(),
        None => auto_tgrid(theta, radius),
    };
    let samples = corner_integral_samples(theta, w0, wlog, radius, &grid)?;
    let exponents = [-T::one(), -T::half(), T::zero(), T::half(), T::one()];
    let advise = |e: Error| {
        match e {
        Error::IllConditioned { condition, limit } => Error::Quality(format!(
            "corner fit condition number {condition:.3e} exceeds {limit:.0e}; choose a t-grid spanning more decades"
        )),
        other => other,
    }
    };
    let fit = fit_finite_part(&samples, &exponents, true).map_err(advise)?;
    let fp = fit.mellin_finite_part();

    let t_max = grid.iter().copied().fold(T::zero(), T::max);
    let lower: Vec<(T, T)> = samples
        .iter()
        .copied()
        .filter(|&(t, _)| t <= t_max * T::half())
        .collect();
    let uncertainty = match fit_finite_part(&lower, &exponents, true) {
        Ok(f) => (f.mellin_finite_part() - fp).abs(),
        Err(_) => T::infinity(),
    };

    let expected = wlog * corner_coefficient(theta) * T::half();
    let b = fit.log_coefficient.unwrap_or_else(T::zero);
    if (b - expected).abs().to_f64_lossy() > LOG_COEFFICIENT_TOLERANCE {
        return Err(Error::Quality(format!(
            "fitted log t coefficient {b} deviates from {expected} by more than {LOG_COEFFICIENT_TOLERANCE:e}"
        )));
    }
    Ok(CornerContribution {
        angle: theta,
        w0,
        wlog,
        fp,
        method: CornerMethod::NumericSeries,
        uncertainty,
        log_coefficient: Some(b),
        expected_log_coefficient: expected,
        radius: Some(radius),
        tgrid: grid,
        diagnostics: Some(fit),
    })
}

/// CSV with columns `t,I` of corner integral samples.
pub fn write_corner_samples<T: Real, W: Write>(samples: &[(T, T)], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["t", "I"])?;
    for &(t, v) in samples {
        w.write_record([
            format!("{:.17e}", t.to_f64_lossy()),
            format!("{:.17e}", v.to_f64_lossy()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Arc contribution (2/α)·(1/12π)·α = 1/(6π), independent of α.
pub fn smooth_boundary_term<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::PI()) {
        return Err(Error::domain(format!(
            "opening angle must lie in (0, π), got {alpha}"
        )));
    }
    Ok((T::lit(6.0) * T::PI()).recip())
}

/// Weights given to the two corners where the arc meets the straight edges,
/// and whether the boundary normal-derivative term is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssemblyConvention {
    /// The arc corners carry the same weight (2/α)(1 + log r) as the vertex;
    /// no normal-derivative term.
    PaperFactor3,
    /// The arc corners carry the local weight 2/α, since log r vanishes to
    /// first order at r = 1; no normal-derivative term.
    LocalWeight,
    /// Local arc-corner weights plus the Dirichlet boundary term
    /// −(1/8π)∫ ∂_N f ds of the weight f = (2/α)(1 + log r), N the inward
    /// normal.
    Complete,
}

impl AssemblyConvention {
    pub fn label(self) -> &'static str {
        match self {
            AssemblyConvention::PaperFactor3 => "paper-factor-3",
            AssemblyConvention::LocalWeight => "local-weight",
            AssemblyConvention::Complete => "complete",
        }
    }
}

/// −(1/8π)∫_arc ∂_N f ds with f = (2/α)(1 + log r): ∂_N f = −2/α on the unit
/// arc of length α, giving 1/(4π). The straight edges do not contribute since
/// f does not depend on φ.
pub fn normal_derivative_term<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::PI()) {
        return Err(Error::domain(format!(
            "opening angle must lie in (0, π), got {alpha}"
        )));
    }
    Ok((T::lit(4.0) * T::PI()).recip())
}

/// How corners at π/2 are evaluated during assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CornerEvaluation {
    /// Closed form at π/2, numeric series elsewhere.
    Auto,
    NumericOnly,
}

/// Assembled angular derivative d/dγ(−log det Δ_γ) at γ = α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VariationReport<T: Real> {
    pub alpha: T,
    pub assembly_convention: String,
    pub smooth_term: T,
    /// Zero unless the convention is `Complete`.
    pub normal_derivative_term: T,
    pub vertex: CornerContribution<T>,
    /// One of the two identical arc corners.
    pub arc_corner: CornerContribution<T>,
    pub total: T,
    pub uncertainty: T,
}

impl<T: Real> VariationReport<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn corner<T: Real>(
    theta: T,
    w0: T,
    wlog: T,
    evaluation: CornerEvaluation,
) -> Result<CornerContribution<T>> {
    let is_right = (theta - T::FRAC_PI_2()).abs() <= T::lit(1e-12);
    if is_right && evaluation == CornerEvaluation::Auto {
        corner_fp_closed_pi2(w0, wlog)
    } else {
        corner_fp_numeric(theta, w0, wlog, T::one(), None)
    }
}

/// smooth term + 2·(arc corner at π/2) + (vertex corner at α), the vertex with
/// weight (2/α)(1 + log r), plus the normal-derivative term under
/// [`AssemblyConvention::Complete`].
pub fn variation_assemble<T: Real>(
    alpha: T,
    convention: AssemblyConvention,
    evaluation: CornerEvaluation,
) -> Result<VariationReport<T>> {
    let smooth = smooth_boundary_term(alpha)?;
    let w = T::two() / alpha;
    let vertex = corner(alpha, w, w, evaluation)?;
    let (arc_wlog, normal) = match convention {
        AssemblyConvention::PaperFactor3 => (w, T::zero()),
        AssemblyConvention::LocalWeight => (T::zero(), T::zero()),
        AssemblyConvention::Complete => (T::zero(), normal_derivative_term(alpha)?),
    };
    let arc_corner = corner(T::FRAC_PI_2(), w, arc_wlog, evaluation)?;
    let total = smooth + normal + T::two() * arc_corner.fp + vertex.fp;
    let uncertainty = T::two() * arc_corner.uncertainty + vertex.uncertainty;
    Ok(VariationReport {
        alpha,
        assembly_convention: convention.label().to_string(),
        smooth_term: smooth,
        normal_derivative_term: normal,
        vertex,
        arc_corner,
        total,
        uncertainty,
    })
}

/// One stencil point of a finite-difference check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StencilPoint<T: Real> {
    pub parameter: T,
    pub minus_logdet: T,
    pub error_estimate: T,
}

/// Central-difference derivative of −log det compared with the assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FdCheck<T: Real> {
    pub alpha: T,
    pub h: T,
    pub stencil: usize,
    pub cutoff: T,
    pub fd_value: T,
    /// Σ|c_i|·error_i/h over the stencil.
    pub fd_error_estimate: T,
    pub assembled_value: T,
    pub assembly_convention: String,
    pub discrepancy: T,
    pub under_resolved: bool,
    pub points: Vec<StencilPoint<T>>,
}

impl<T: Real> FdCheck<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn stencil_weights<T: Real>(stencil: usize) -> Result<Vec<(T, T)>> {
    match stencil {
        3 => Ok(vec![(-T::one(), -T::half()), (T::one(), T::half())]),
        5 => {
            let c = T::lit(12.0).recip();
            Ok(vec![
                (-T::two(), c),
                (-T::one(), -T::lit(8.0) * c),
                (T::one(), T::lit(8.0) * c),
                (T::two(), -c),
            ])
        }
        s => Err(Error::domain(format!("stencil must be 3 or 5, got {s}"))),
    }
}

fn central_difference<T: Real, F>(
    x: T,
    h: T,
    stencil: usize,
    f: F,
) -> Result<(T, T, Vec<StencilPoint<T>>)>
where
    F: Fn(T) -> Result<(T, T)> + Sync,
{
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let weights = stencil_weights::<T>(stencil)?;
    let points = weights
        .iter()
        .map(|&(k, _)| {
            let p = x + k * h;
            let (v, e) = f(p)?;
            Ok(StencilPoint {
                parameter: p,
                minus_logdet: v,
                error_estimate: e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut value = CompensatedSum::new();
    let mut err = T::zero();
    for (&(_, c), p) in weights.iter().zip(&points) {
        value.add(c * p.minus_logdet);
        err += c.abs() * p.error_estimate;
    }
    Ok((value.value() / h, err / h, points))
}

/// d/dα(−log det) of the unit-radius sector by a central difference of the
/// spectral pipeline, compared with [`variation_assemble`].
pub fn fd_derivative_check<T: Real>(
    alpha: T,
    h: T,
    stencil: usize,
    cutoff: T,
    convention: AssemblyConvention,
) -> Result<FdCheck<T>> {
    let reach = if stencil == 5 { T::two() * h } else { h };
    if !(alpha - reach > T::zero() && alpha + reach < T::PI()) {
        return Err(Error::domain(format!(
            "stencil [{}, {}] leaves (0, π)",
            alpha - reach,
            alpha + reach
        )));
    }
    let scheme = DetScheme::default();
    let (fd_value, fd_error_estimate, points) = central_difference(alpha, h, stencil, |a| {
        let table = sector_spectrum(&SectorGeometry::unit(a)?, cutoff)?;
        let det = zeta_prime_zero_auto(&table, &scheme)?;
        Ok((det.zeta_prime0, det.error_estimate))
    })?;
    let under_resolved = fd_error_estimate.to_f64_lossy() > UNDER_RESOLVED_LIMIT;
    if under_resolved {
        log::warn!(
            "finite-difference stencil under-resolved: propagated error {} for h = {h}",
            fd_error_estimate
        );
    }
    let assembled = variation_assemble(alpha, convention, CornerEvaluation::Auto)?;
    Ok(FdCheck {
        alpha,
        h,
        stencil,
        cutoff,
        fd_value,
        fd_error_estimate,
        assembled_value: assembled.total,
        assembly_convention: convention.label().to_string(),
        discrepancy: (fd_value - assembled.total).abs(),
        under_resolved,
        points,
    })
}

/// d/dL(−log det) of the unit-area rectangle from the eta closed form.
pub fn rect_fd_derivative<T: Real>(
    l: T,
    h: T,
    stencil: usize,
    convention: RectConvention,
) -> Result<T> {
    if !(l - T::two() * h > T::zero()) {
        return Err(Error::domain("stencil leaves L > 0"));
    }
    let (d, _, _) =
        central_difference(l, h, stencil, |x| Ok((f_value(x, convention)?, T::zero())))?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat_kernels::sector_diag_series;
    use crate::quadrature::integrate_adaptive;
    use crate::EULER_GAMMA_F64 as G;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn closed_form_values() {
        let c = corner_fp_closed_pi2(4.0 / PI, 4.0 / PI).unwrap();
        assert!((c.fp + (1.0 + G) / (4.0 * PI)).abs() < 1e-15);
        assert!((c.fp + 0.1255109).abs() < 1e-7);
        let c = corner_fp_closed_pi2(1.0_f64, 0.0).unwrap();
        assert!((c.fp - corner_coefficient(PI / 2.0)).abs() < 1e-16);
        let c = corner_fp_closed_pi2(0.0_f64, 1.0).unwrap();
        assert!((c.fp + 0.1610760).abs() < 1e-7);
        assert!((c.fp - (PI / 4.0) * (-G / (4.0 * PI) - 1.0 / (2.0 * PI))).abs() < 1e-15);
    }

    #[test]
    fn angular_collapse_matches_two_dimensional_quadrature() {
        for &(theta, t, r) in &[
            (PI / 2.0, 0.01, 0.3),
            (PI / 3.0, 0.02, 0.15),
            (2.0, 0.005, 0.2),
        ] {
            let direct = integrate_adaptive(
                |phi| {
                    sector_diag_series(theta, t, r, phi, Truncation::Auto)
                        .unwrap()
                        .value
                },
                0.0,
                theta,
                1e-14,
                1e-12,
            )
            .unwrap()
            .value;
            let z = r * r / (2.0 * t);
            let collapsed =
                sector_radial_sum(theta, z, Truncation::Auto).unwrap().value / (2.0 * t);
            assert!(
                (direct - collapsed).abs() < 1e-10 * collapsed,
                "{theta}: {direct} vs {collapsed}"
            );
        }
    }

    /// ∫_0^∞ log z e^{-z}(S_θ − S_∞) by the image representation: the
    /// directions 2πm/p contribute ∫ log z e^{-κz} = −(γ + log κ)/κ and the
    /// diffractive part is an integral over u of the same with κ = 1 + cosh u.
    fn image_moments(theta: f64) -> (f64, f64) {
        let p = PI / theta;
        let mut c = 0.0;
        let mut d = 0.0;
        let mut m = 1;
        while (2.0 * PI * m as f64) / p <= PI + 1e-12 {
            let a = 2.0 * PI * m as f64 / p;
            let w = if (a - PI).abs() < 1e-12 { 0.5 } else { 1.0 };
            let kappa = 1.0 - a.cos();
            c += w / (p * kappa);
            d -= w * (G + kappa.ln()) / (p * kappa);
            m += 1;
        }
        let q = |u: f64| {
            if (p - p.round()).abs() < 1e-12 {
                return 0.0;
            }
            let e = (-p * u).exp();
            (p * PI).sin() * e / (1.0 - 2.0 * e * (p * PI).cos() + e * e)
        };
        let qc = integrate_adaptive(|u| q(u) / (1.0 + u.cosh()), 0.0, 60.0, 1e-15, 1e-13)
            .unwrap()
            .value;
        let qd = integrate_adaptive(
            |u| q(u) * (G + (1.0 + u.cosh()).ln()) / (1.0 + u.cosh()),
            0.0,
            60.0,
            1e-15,
            1e-13,
        )
        .unwrap()
        .value;
        (c - qc / PI, d + qd / PI)
    }

    #[test]
    fn image_moments_reproduce_corner_coefficient() {
        for &theta in &[
            PI / 6.0,
            PI / 4.0,
            PI / 3.0,
            PI / 2.0,
            2.0,
            2.0 * PI / 3.0,
            2.9,
        ] {
            let (c2, _) = image_moments(theta);
            assert!(
                (c2 - 2.0 * corner_coefficient(theta)).abs() < 1e-11,
                "{theta}"
            );
        }
        let (_, d) = image_moments(PI / 2.0);
        assert!((d + (G + LN_2) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_matches_image_oracle() {
        for &(theta, w0, wlog) in &[
            (PI / 2.0, 4.0 / PI, 4.0 / PI),
            (PI / 3.0, 0.3, -1.2),
            (2.3, 1.0, 0.7),
        ] {
            let (_, d) = image_moments(theta);
            let c = corner_coefficient(theta);
            let oracle = w0 * c + wlog * (d / 4.0 - 0.125 - G * c / 2.0 + LN_2 * c / 2.0);
            let num = corner_fp_numeric(theta, w0, wlog, 1.0, None).unwrap();
            assert!(
                (num.fp - oracle).abs() < 1e-4,
                "{theta}: {} vs {oracle}",
                num.fp
            );
            assert!(num.uncertainty < 1e-4);
        }
    }

    #[test]
    fn numeric_reproduces_closed_form_at_right_angle() {
        let num = corner_fp_numeric(PI / 2.0, 4.0 / PI, 4.0 / PI, 1.0, None).unwrap();
        assert!((num.fp + (1.0 + G) / (4.0 * PI)).abs() < 1e-4, "{}", num.fp);
        let b = num.log_coefficient.unwrap();
        assert!((b - num.expected_log_coefficient).abs() < 1e-3);
    }

    #[test]
    fn constant_weight_law_and_radius_invariance() {
        for &theta in &[PI / 4.0, 2.0 * PI / 3.0] {
            let c = corner_fp_numeric(theta, 1.0, 0.0, 1.0, None).unwrap();
            assert!((c.fp - corner_coefficient(theta)).abs() < 1e-4);
            assert!(c.log_coefficient.unwrap().abs() < 1e-3);
        }
        let a = corner_fp_numeric(PI / 2.0, 1.0, 0.0, 0.5, None).unwrap();
        let b = corner_fp_numeric(PI / 2.0, 1.0, 0.0, 1.0, None).unwrap();
        assert!((a.fp - b.fp).abs() < 2e-4);
    }

    #[test]
    fn rejects_bad_grid_and_angles() {
        assert!(corner_fp_numeric(PI / 2.0, 1.0, 0.0, 1.0, Some(&[0.2, 0.01])).is_err());
        assert!(corner_fp_numeric(PI, 1.0, 0.0, 1.0, None).is_err());
        assert!(corner_fp_numeric(PI / 2.0, 1.0, 0.0, -1.0, None).is_err());
        let tiny: Vec<f64> = log_spaced(1e-4, 1.0001e-4, 24);
        assert!(corner_fp_numeric(PI / 2.0, 1.0, 0.0, 1.0, Some(&tiny)).is_err());
    }

    #[test]
    fn assembly_at_right_angle() {
        let r = variation_assemble(
            PI / 2.0,
            AssemblyConvention::PaperFactor3,
            CornerEvaluation::Auto,
        )
        .unwrap();
        let expected = 1.0 / (6.0 * PI) - 3.0 / (4.0 * PI) - 3.0 * G / (4.0 * PI);
        assert!((r.total - expected).abs() < 1e-14);
        assert!((r.total + 0.323481).abs() < 1e-6);
        assert_eq!(r.assembly_convention, "paper-factor-3");
        let local = variation_assemble(
            PI / 2.0,
            AssemblyConvention::LocalWeight,
            CornerEvaluation::Auto,
        )
        .unwrap();
        assert!((local.total - (5.0 / (12.0 * PI) - G / (4.0 * PI))).abs() < 1e-14);
        let full = variation_assemble(
            PI / 2.0,
            AssemblyConvention::Complete,
            CornerEvaluation::Auto,
        )
        .unwrap();
        assert!((full.total - (2.0 / (3.0 * PI) - G / (4.0 * PI))).abs() < 1e-14);
        let num = variation_assemble(
            PI / 2.0,
            AssemblyConvention::PaperFactor3,
            CornerEvaluation::NumericOnly,
        )
        .unwrap();
        assert!((num.total - r.total).abs() < 3e-4);
    }

    #[test]
    fn smooth_term_is_angle_independent() {
        assert_eq!(smooth_boundary_term(PI / 2.0).unwrap(), 1.0 / (6.0 * PI));
        assert_eq!(smooth_boundary_term(PI / 3.0).unwrap(), 1.0 / (6.0 * PI));
        assert!(smooth_boundary_term(PI).is_err());
    }

    #[test]
    fn rectangle_derivative_vanishes_at_square() {
        for c in [RectConvention::Paper, RectConvention::Corrected] {
            let d = rect_fd_derivative(1.0_f64, 0.01, 5, c).unwrap();
            assert!(d.abs() < 1e-3);
        }
        let d = rect_fd_derivative(2.0_f64, 0.01, 5, RectConvention::Corrected).unwrap();
        assert!(d > 0.1);
    }

    #[test]
    fn stencil_exactness() {
        let (d, _, _) = central_difference(0.3_f64, 0.1, 5, |x| Ok((x.powi(4), 0.0))).unwrap();
        assert!((d - 4.0 * 0.3_f64.powi(3)).abs() < 1e-12);
        let (d, _, _) = central_difference(0.3_f64, 0.1, 3, |x| Ok((x * x, 0.0))).unwrap();
        assert!((d - 0.6).abs() < 1e-12);
        assert!(central_difference(0.3_f64, 0.1, 4, |x| Ok((x, 0.0))).is_err());
    }

    #[test]
    fn samples_csv() {
        let grid = auto_tgrid(PI / 2.0, 1.0);
        let s = corner_integral_samples(PI / 2.0, 1.0, 0.0, 1.0, &grid[..3]).unwrap();
        let mut buf = Vec::new();
        write_corner_samples(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }
}
