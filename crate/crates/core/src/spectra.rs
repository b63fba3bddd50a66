//! Dirichlet eigenvalues below a cutoff for circular sectors (squared Bessel
//! zeros) and rectangles (lattice points), with a two-term Weyl check.

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::bessel_zeros_below;

/// Circular sector of opening `angle` and radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SectorGeometry<T: Real> {
    pub angle: T,
    pub radius: T,
}

impl<T: Real> SectorGeometry<T> {
    pub fn new(angle: T, radius: T) -> Result<Self> {
        if !(angle > T::zero() && angle < T::PI()) {
            return Err(Error::domain(format!(
                "sector angle must lie in (0, π), got {angle}"
            )));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::domain(format!(
                "sector radius must be positive, got {radius}"
            )));
        }
        Ok(Self { angle, radius })
    }

    pub fn unit(angle: T) -> Result<Self> {
        Self::new(angle, T::one())
    }

    pub fn area(&self) -> T {
        self.angle * self.radius * self.radius * T::half()
    }

    pub fn perimeter(&self) -> T {
        T::two() * self.radius + self.angle * self.radius
    }

    /// Interior angles: the vertex, then the two arc corners.
    pub fn corners(&self) -> [T; 3] {
        [self.angle, T::FRAC_PI_2(), T::FRAC_PI_2()]
    }

    pub fn arc_curvature(&self) -> T {
        self.radius.recip()
    }
}

/// Rectangle with sides `scale·l` and `scale/l` (area `scale²`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RectangleGeometry<T: Real> {
    pub l: T,
    pub scale: T,
}

impl<T: Real> RectangleGeometry<T> {
    pub fn new(l: T) -> Result<Self> {
        Self::scaled(l, T::one())
    }

    pub fn scaled(l: T, scale: T) -> Result<Self> {
        if !(l > T::zero()) || !l.is_finite() || !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::domain(format!(
                "rectangle needs positive finite L and scale, got ({l}, {scale})"
            )));
        }
        Ok(Self { l, scale })
    }

    pub fn area(&self) -> T {
        self.scale * self.scale
    }

    pub fn perimeter(&self) -> T {
        T::two() * self.scale * (self.l + self.l.recip())
    }

    pub fn corners(&self) -> [T; 4] {
        [T::FRAC_PI_2(); 4]
    }
}

/// The domain a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "lowercase")]
pub enum Domain<T: Real> {
    Sector(SectorGeometry<T>),
    Rectangle(RectangleGeometry<T>),
}

impl<T: Real> Domain<T> {
    pub fn area(&self) -> T {
        match self {
            Domain::Sector(g) => g.area(),
            Domain::Rectangle(g) => g.area(),
        }
    }

    pub fn perimeter(&self) -> T {
        match self {
            Domain::Sector(g) => g.perimeter(),
            Domain::Rectangle(g) => g.perimeter(),
        }
    }

    /// Interior angles of all corners.
    pub fn corners(&self) -> Vec<T> {
        match self {
            Domain::Sector(g) => g.corners().to_vec(),
            Domain::Rectangle(g) => g.corners().to_vec(),
        }
    }

    /// ∫ κ ds over the boundary.
    pub fn total_curvature(&self) -> T {
        match self {
            Domain::Sector(g) => g.angle,
            Domain::Rectangle(_) => T::zero(),
        }
    }

    /// The same shape dilated by `factor`.
    pub fn dilated(&self, factor: T) -> Result<Self> {
        match *self {
            Domain::Sector(g) => Ok(Domain::Sector(SectorGeometry::new(
                g.angle,
                g.radius * factor,
            )?)),
            Domain::Rectangle(g) => Ok(Domain::Rectangle(RectangleGeometry::scaled(
                g.l,
                g.scale * factor,
            )?)),
        }
    }
}

/// One eigenvalue with its separation-of-variables indices: (k, n) for a
/// sector (order kπ/α, n-th zero), (m, n) for a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpectralEntry<T: Real> {
    pub lambda: T,
    pub k_or_m: u32,
    pub n: u32,
}

/// Sorted Dirichlet eigenvalues not exceeding `cutoff`, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpectrumTable<T: Real> {
    pub domain: Domain<T>,
    pub cutoff: T,
    pub entries: Vec<SpectralEntry<T>>,
}

fn entry_order<T: Real>(a: &SpectralEntry<T>, b: &SpectralEntry<T>) -> Ordering {
    a.lambda
        .partial_cmp(&b.lambda)
        .unwrap_or(Ordering::Equal)
        .then(a.k_or_m.cmp(&b.k_or_m))
        .then(a.n.cmp(&b.n))
}

fn check_cutoff<T: Real>(cutoff: T) -> Result<()> {
    if !(cutoff > T::zero()) || !cutoff.is_finite() {
        return Err(Error::domain(format!(
            "cutoff must be positive and finite, got {cutoff}"
        )));
    }
    Ok(())
}

impl<T: Real> SpectrumTable<T> {
    fn from_entries(domain: Domain<T>, cutoff: T, mut entries: Vec<SpectralEntry<T>>) -> Self {
        entries.sort_by(entry_order);
        if entries.is_empty() {
            log::warn!("spectrum below cutoff {cutoff} is empty");
        }
        Self {
            domain,
            cutoff,
            entries,
        }
    }

    /// A table built from raw eigenvalues, e.g. for tests and external
    /// spectra. Indices are the 1-based positions after sorting.
    pub fn from_eigenvalues(domain: Domain<T>, cutoff: T, eigenvalues: &[T]) -> Result<Self> {
        check_cutoff(cutoff)?;
        if eigenvalues.iter().any(|&l| !(l > T::zero()) || l > cutoff) {
            return Err(Error::domain("eigenvalues must lie in (0, cutoff]"));
        }
        let mut sorted = eigenvalues.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        let entries = sorted
            .into_iter()
            .enumerate()
            .map(|(i, lambda)| SpectralEntry {
                lambda,
                k_or_m: (i + 1) as u32,
                n: 1,
            })
            .collect();
        Ok(Self::from_entries(domain, cutoff, entries))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().map(|e| e.lambda)
    }

    pub fn first(&self) -> Option<T> {
        self.entries.first().map(|e| e.lambda)
    }

    /// Spectrum of the domain dilated by `factor`: every eigenvalue and the
    /// cutoff are divided by `factor²`.
    pub fn dilated(&self, factor: T) -> Result<Self> {
        if !(factor > T::zero()) || !factor.is_finite() {
            return Err(Error::domain(format!(
                "dilation factor must be positive, got {factor}"
            )));
        }
        let s = factor * factor;
        Ok(Self {
            domain: self.domain.dilated(factor)?,
            cutoff: self.cutoff / s,
            entries: self
                .entries
                .iter()
                .map(|e| SpectralEntry {
                    lambda: e.lambda / s,
                    ..*e
                })
                .collect(),
        })
    }

    /// CSV with columns `lambda,k_or_m,n`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["lambda", "k_or_m", "n"])?;
        for e in &self.entries {
            w.write_record([
                format!("{:.17e}", e.lambda.to_f64_lossy()),
                e.k_or_m.to_string(),
                e.n.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Dirichlet eigenvalues (j_{kπ/α, n}/R)² ≤ Λ of a circular sector.
///
/// Orders kπ/α are swept upward; since j_{ν,1} > ν, no order above √Λ·R
/// contributes. A cutoff below the first eigenvalue yields an empty table
/// (with a warning), not an error.
pub fn sector_spectrum<T: Real>(geom: &SectorGeometry<T>, cutoff: T) -> Result<SpectrumTable<T>> {
    SectorGeometry::new(geom.angle, geom.radius)?;
    check_cutoff(cutoff)?;
    let limit = cutoff.sqrt() * geom.radius;
    let p = T::PI() / geom.angle;
    let k_max = (limit / p).floor().to_usize().unwrap_or(0);
    let r2 = geom.radius * geom.radius;
    let per_order: Vec<Vec<SpectralEntry<T>>> = (1..=k_max)
        .into_par_iter()
        .map(|k| -> Result<Vec<SpectralEntry<T>>> {
            let nu = p * T::from_usize_lossy(k);
            let zeros = bessel_zeros_below(nu, limit)?;
            Ok(zeros
                .into_iter()
                .enumerate()
                .map(|(i, j)| SpectralEntry {
                    lambda: j * j / r2,
                    k_or_m: k as u32,
                    n: (i + 1) as u32,
                })
                .filter(|e| e.lambda <= cutoff)
                .collect())
        })
        .collect::<Result<_>>()?;
    let entries = per_order.into_iter().flatten().collect();
    Ok(SpectrumTable::from_entries(
        Domain::Sector(*geom),
        cutoff,
        entries,
    ))
}

/// Lattice eigenvalues π²(m²/L² + n²L²) ≤ Λ of the unit-area rectangle
/// with sides L and 1/L.
pub fn rectangle_spectrum<T: Real>(l: T, cutoff: T) -> Result<SpectrumTable<T>> {
    let geom = RectangleGeometry::new(l)?;
    check_cutoff(cutoff)?;
    let pi2 = T::PI() * T::PI();
    let a = pi2 / (l * l);
    let b = pi2 * l * l;
    let m_max = ((cutoff - b) / a)
        .max(T::zero())
        .sqrt()
        .floor()
        .to_usize()
        .unwrap_or(0);
    let rows: Vec<Vec<SpectralEntry<T>>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mf = T::from_usize_lossy(m);
            let base = a * mf * mf;
            let mut row = Vec::new();
            let mut n = 1usize;
            loop {
                let nf = T::from_usize_lossy(n);
                let lambda = base + b * nf * nf;
                if lambda > cutoff {
                    break;
                }
                row.push(SpectralEntry {
                    lambda,
                    k_or_m: m as u32,
                    n: n as u32,
                });
                n += 1;
            }
            row
        })
        .collect();
    let entries = rows.into_iter().flatten().collect();
    Ok(SpectrumTable::from_entries(
        Domain::Rectangle(geom),
        cutoff,
        entries,
    ))
}

/// Relative deviation |N(Λ) − (AΛ/4π − P√Λ/4π)| / N(Λ) of the eigenvalue
/// count from the two-term Weyl law.
pub fn weyl_check<T: Real>(table: &SpectrumTable<T>) -> Result<T> {
    if table.is_empty() {
        return Err(Error::EmptySpectrum {
            cutoff: table.cutoff.to_f64_lossy(),
        });
    }
    let n = T::from_usize_lossy(table.len());
    let four_pi = T::lit(4.0) * T::PI();
    let lam = table.cutoff;
    let weyl =
        table.domain.area() * lam / four_pi - table.domain.perimeter() * lam.sqrt() / four_pi;
    Ok((n - weyl).abs() / n)
}
