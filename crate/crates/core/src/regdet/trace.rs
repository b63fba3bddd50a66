use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::erfc;
use crate::spectra::SpectrumTable;

/// One heat-trace evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TraceSample<T: Real> {
    pub t: T,
    pub trace: T,
    pub tail_bound: T,
}

/// Heat trace on a grid of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HeatTraceSamples<T: Real> {
    pub samples: Vec<TraceSample<T>>,
    pub cutoff: T,
    pub tail_correction: bool,
}

impl<T: Real> HeatTraceSamples<T> {
    pub fn points(&self) -> Vec<(T, T)> {
        self.samples.iter().map(|s| (s.t, s.trace)).collect()
    }

    /// CSV with columns `t,trace,tail_bound`.
    pub fn write_csv<W: std::io::Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["t", "trace", "tail_bound"])?;
        for s in &self.samples {
            w.write_record([
                format!("{:.17e}", s.t.to_f64_lossy()),
                format!("{:.17e}", s.trace.to_f64_lossy()),
                format!("{:.17e}", s.tail_bound.to_f64_lossy()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / T::from_usize_lossy(n - 1);
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + step * T::from_usize_lossy(i)).exp()
                    }
                })
                .collect()
        }
    }
}

/// Tr e^{-tΔ} from the table, with a bound on what the cutoff misses.
///
/// Without tail correction the bound uses N(λ) ≲ Aλ/4π above the cutoff:
/// Σ_{λ>Λ} e^{-λt} ≤ (A/4π) e^{-Λt}(Λ + 1/t). With tail correction the
/// two-term Weyl density is integrated from Λ to ∞,
/// (A/4π) e^{-Λt}/t − (P/8π)√(π/t) erfc(√(Λt)), and the reported bound is
/// the size of the counting-function remainder at the cutoff,
/// e^{-Λt}(|N(Λ) − W(Λ)| + √Λ (1 + 1/(2Λt))).
pub fn heat_trace<T: Real>(
    table: &SpectrumTable<T>,
    t: T,
    tail_correction: bool,
) -> Result<TraceSample<T>> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!(
            "heat time must be positive, got {t}"
        )));
    }
    let sum = table
        .eigenvalues()
        .map(|l| (-l * t).exp())
        .collect::<CompensatedSum<T>>()
        .value();
    let four_pi = T::lit(4.0) * T::PI();
    let area = table.domain.area();
    let perim = table.domain.perimeter();
    let lam = table.cutoff;
    let decay = (-lam * t).exp();
    if !tail_correction {
        let bound = area / four_pi * decay * (lam + t.recip());
        return Ok(TraceSample {
            t,
            trace: sum,
            tail_bound: bound,
        });
    }
    let tail = area / four_pi * decay / t
        - perim / (T::lit(8.0) * T::PI()) * (T::PI() / t).sqrt() * erfc((lam * t).sqrt());
    let weyl = area * lam / four_pi - perim * lam.sqrt() / four_pi;
    let remainder = (T::from_usize_lossy(table.len()) - weyl).abs();
    let bound = decay * (remainder + lam.sqrt() * (T::one() + (T::two() * lam * t).recip()));
    Ok(TraceSample {
        t,
        trace: sum + tail,
        tail_bound: bound,
    })
}

/// Heat trace on a grid, evaluated in parallel; output order follows `ts`.
pub fn heat_trace_samples<T: Real>(
    table: &SpectrumTable<T>,
    ts: &[T],
    tail_correction: bool,
) -> Result<HeatTraceSamples<T>> {
    let samples = ts
        .par_iter()
        .map(|&t| heat_trace(table, t, tail_correction))
        .collect::<Result<Vec<_>>>()?;
    Ok(HeatTraceSamples {
        samples,
        cutoff: table.cutoff,
        tail_correction,
    })
}
