use serde::{Deserialize, Serialize};

use super::fit::fit_finite_part;
use super::trace::{heat_trace, heat_trace_samples, log_spaced};
use super::{heat_invariants, HeatInvariants};
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive_vec;
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::{e1_unchecked, euler_gamma};
use crate::spectra::{Domain, SpectrumTable};

/// Smallest admissible Λ·t_min.
pub const MIN_CUTOFF_TIME_PRODUCT: f64 = 25.0;

/// Parameters of the split-Mellin evaluation of ζ′(0).
///
/// `None` fields take defaults from the table: t_min = 25/Λ, tail
/// correction on for sectors and off for rectangles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DetScheme<T: Real> {
    pub t_min: Option<T>,
    pub t_split: T,
    /// The small-t extension is fitted on [t_min, window_factor·t_min].
    pub window_factor: T,
    pub window_points: usize,
    pub tail_correction: Option<bool>,
    /// Relative tolerance of the adaptive quadrature on [t_min, t_split].
    pub rel_tol: T,
    /// Also fit a2 freely from trace samples on [t_min, a2_fit_factor·t_min].
    pub fit_a2: bool,
    pub a2_fit_factor: T,
    pub a2_fit_points: usize,
}

impl<T: Real> Default for DetScheme<T> {
    fn default() -> Self {
        Self {
            t_min: None,
            t_split: T::one(),
            window_factor: T::lit(10.0),
            window_points: 16,
            tail_correction: None,
            rel_tol: T::lit(1e-10),
            fit_a2: true,
            a2_fit_factor: T::lit(40.0),
            a2_fit_points: 24,
        }
    }
}

/// The scheme with every default filled in, as recorded in a result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ResolvedScheme<T: Real> {
    pub t_min: T,
    pub t_split: T,
    pub window_factor: T,
    pub window_points: usize,
    pub tail_correction: bool,
    pub rel_tol: T,
}

/// The three pieces of ζ′(0) besides the explicit invariant terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MellinPieces<T: Real> {
    /// ∫_0^{t_min} of the fitted extension, in closed form.
    pub below_t_min: T,
    /// ∫_{t_min}^{t_split} t^{-1}(Tr − a0/t − a1/√t − a2) dt.
    pub window: T,
    /// ∫_{t_split}^∞ t^{-1} Tr dt = Σ_k E1(λ_k t_split).
    pub large_t: T,
}

/// Zeta-regularized determinant with an audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DetResult<T: Real> {
    pub zeta0: T,
    pub zeta_prime0: T,
    pub logdet: T,
    pub det: T,
    pub error_estimate: T,
    /// a2 fitted freely from trace samples; compare with `zeta0`.
    pub fitted_a2: Option<T>,
    /// log t coefficient of that free fit.
    pub fitted_log_coefficient: Option<T>,
    pub invariants: HeatInvariants<T>,
    pub domain: Domain<T>,
    pub cutoff: T,
    pub eigenvalue_count: usize,
    pub scheme: ResolvedScheme<T>,
    pub pieces: MellinPieces<T>,
    /// Dilation applied by [`scale_logdet`] after the spectral computation.
    pub scaled_by: T,
}

impl<T: Real> DetResult<T> {
    fn with_zeta_prime(mut self, zeta_prime0: T) -> Self {
        self.zeta_prime0 = zeta_prime0;
        self.logdet = -zeta_prime0;
        self.det = (-zeta_prime0).exp();
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn resolve<T: Real>(table: &SpectrumTable<T>, scheme: &DetScheme<T>) -> Result<ResolvedScheme<T>> {
    let required = T::lit(MIN_CUTOFF_TIME_PRODUCT);
    let t_min = scheme.t_min.unwrap_or(required / table.cutoff);
    let product = table.cutoff * t_min;
    // Allow for rounding in the default t_min = 25/Λ.
    if product < required * (T::one() - T::lit(1e-12)) {
        return Err(Error::CutoffTooSmall {
            product: product.to_f64_lossy(),
            required: MIN_CUTOFF_TIME_PRODUCT,
        });
    }
    if !(scheme.window_factor > T::one()) || scheme.window_points < 6 {
        return Err(Error::domain(
            "extension window needs factor > 1 and at least 6 points",
        ));
    }
    if t_min * scheme.window_factor >= scheme.t_split {
        return Err(Error::CutoffTooSmall {
            product: product.to_f64_lossy(),
            required: MIN_CUTOFF_TIME_PRODUCT
                * (scheme.window_factor / scheme.t_split * t_min).to_f64_lossy(),
        });
    }
    let tail_correction = scheme
        .tail_correction
        .unwrap_or(matches!(table.domain, Domain::Sector(_)));
    Ok(ResolvedScheme {
        t_min,
        t_split: scheme.t_split,
        window_factor: scheme.window_factor,
        window_points: scheme.window_points,
        tail_correction,
        rel_tol: scheme.rel_tol,
    })
}

/// ζ′(0) by the split Mellin formula
///
/// ```text
/// ζ′(0) = γ_e a2 + ∫_0^1 t^{-1}(Tr − a0/t − a1/√t − a2) dt − a0 − 2a1 + ∫_1^∞ t^{-1} Tr dt
/// ```
///
/// with the split at `t_split`. Below t_min the regularized trace is
/// replaced by c½√t + c1 t + c3/2 t^{3/2} fitted on the window and integrated
/// in closed form. The large-t integral is evaluated exactly as
/// Σ E1(λ t_split) rather than by quadrature.
pub fn zeta_prime_zero<T: Real>(
    table: &SpectrumTable<T>,
    invariants: &HeatInvariants<T>,
    scheme: &DetScheme<T>,
) -> Result<DetResult<T>> {
    if table.is_empty() {
        return Err(Error::EmptySpectrum {
            cutoff: table.cutoff.to_f64_lossy(),
        });
    }
    let expected = heat_invariants(&table.domain);
    let mismatch = (expected.a0 - invariants.a0).abs()
        + (expected.a1 - invariants.a1).abs()
        + (expected.a2 - invariants.a2).abs();
    if mismatch > T::lit(1e-10) {
        log::warn!("heat invariants differ from the table geometry by {mismatch}");
    }
    let rs = resolve(table, scheme)?;
    let HeatInvariants { a0, a1, a2 } = *invariants;
    let regularized = |t: T| -> Result<(T, T)> {
        let s = heat_trace(table, t, rs.tail_correction)?;
        Ok((s.trace - a0 / t - a1 / t.sqrt() - a2, s.tail_bound))
    };

    // Small-t extension.
    let window = log_spaced(rs.t_min, rs.t_min * rs.window_factor, rs.window_points);
    let mut points = Vec::with_capacity(window.len());
    for &t in &window {
        points.push((t, regularized(t)?.0));
    }
    let half = T::half();
    let ext_integral = |c: &[T]| -> T {
        let tm = rs.t_min;
        let mut v = c[0] * T::two() * tm.sqrt();
        if c.len() > 1 {
            v += c[1] * tm;
        }
        if c.len() > 2 {
            v += c[2] * T::lit(2.0 / 3.0) * tm.powf(T::lit(1.5));
        }
        v
    };
    let full = fit_finite_part(&points, &[half, T::one(), T::lit(1.5)], false)?;
    let reduced = fit_finite_part(&points, &[half, T::one()], false)?;
    let below_t_min = ext_integral(&full.coefficients);
    let extrapolation_error = (below_t_min - ext_integral(&reduced.coefficients)).abs();

    // Window integral in u = log t; the second component integrates the
    // trace truncation bound the same way.
    let quad = integrate_adaptive_vec(
        |u: T| {
            let t = u.exp();
            match regularized(t) {
                Ok((r, b)) => [r, b],
                Err(_) => [T::nan(), T::nan()],
            }
        },
        rs.t_min.ln(),
        rs.t_split.ln(),
        T::lit(1e-13),
        rs.rel_tol,
    )?;
    if !quad.value[0].is_finite() {
        return Err(Error::Quality(
            "regularized heat trace is not finite on the window".into(),
        ));
    }
    let window_integral = quad.value[0];
    let truncation_error = quad.value[1];

    // Large-t part: ∫_{t_split}^∞ e^{-λt}/t dt = E1(λ t_split).
    let large_t = table
        .eigenvalues()
        .map(|l| e1_unchecked(l * rs.t_split))
        .collect::<CompensatedSum<T>>()
        .value();
    let ts = rs.t_split;
    let large_t_tail = {
        let lam = table.cutoff;
        table.domain.area() / (T::lit(4.0) * T::PI()) * (-lam * ts).exp() * (lam + ts.recip())
            / (lam * ts)
    };

    let zeta_prime0 =
        euler_gamma::<T>() * a2 + below_t_min + window_integral - a0 - T::two() * a1 + large_t;
    let error_estimate = quad.error + truncation_error + extrapolation_error + large_t_tail;

    let (fitted_a2, fitted_log_coefficient) = if scheme.fit_a2 {
        let ts = log_spaced(
            rs.t_min,
            rs.t_min * scheme.a2_fit_factor,
            scheme.a2_fit_points,
        );
        let samples = heat_trace_samples(table, &ts, rs.tail_correction)?;
        let exps = [-T::one(), -half, T::zero(), half, T::one(), T::lit(1.5)];
        let free = fit_finite_part(&samples.points(), &exps, false)?;
        let with_log = fit_finite_part(&samples.points(), &exps[..5], true)?;
        (Some(free.finite_part()), with_log.log_coefficient)
    } else {
        (None, None)
    };

    let result = DetResult {
        zeta0: a2,
        zeta_prime0,
        logdet: T::zero(),
        det: T::zero(),
        error_estimate,
        fitted_a2,
        fitted_log_coefficient,
        invariants: *invariants,
        domain: table.domain,
        cutoff: table.cutoff,
        eigenvalue_count: table.len(),
        scheme: rs,
        pieces: MellinPieces {
            below_t_min,
            window: window_integral,
            large_t,
        },
        scaled_by: T::one(),
    };
    Ok(result.with_zeta_prime(zeta_prime0))
}

/// [`zeta_prime_zero`] with invariants taken from the table's geometry.
pub fn zeta_prime_zero_auto<T: Real>(
    table: &SpectrumTable<T>,
    scheme: &DetScheme<T>,
) -> Result<DetResult<T>> {
    zeta_prime_zero(table, &heat_invariants(&table.domain), scheme)
}

/// Determinant of the domain dilated by `r`: log det ↦ log det − 2ζ(0) log r.
pub fn scale_logdet<T: Real>(result: &DetResult<T>, r: T) -> Result<DetResult<T>> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!(
            "scale factor must be positive, got {r}"
        )));
    }
    let logdet = result.logdet - T::two() * result.zeta0 * r.ln();
    let mut out = result.clone();
    out.domain = result.domain.dilated(r)?;
    out.invariants = HeatInvariants {
        a0: result.invariants.a0 * r * r,
        a1: result.invariants.a1 * r,
        a2: result.invariants.a2,
    };
    out.scaled_by = result.scaled_by * r;
    Ok(out.with_zeta_prime(-logdet))
}
