use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{condition_number, least_squares};
use crate::scalar::Real;
use crate::specfun::euler_gamma;

/// Fits with a larger (column-scaled) condition number are rejected.
pub const FIT_CONDITION_LIMIT: f64 = 1e10;

const ALLOWED_TWICE_EXPONENTS: [i32; 6] = [-2, -1, 0, 1, 2, 3];

/// Least-squares fit of v(t) ≈ Σ_e c_e t^e (+ b·log t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AsymptoticFit<T: Real> {
    pub exponents: Vec<T>,
    pub coefficients: Vec<T>,
    /// Coefficient b of the t^0·log t basis element, if it was included.
    pub log_coefficient: Option<T>,
    /// 2-norm of the weighted residual.
    pub residual_norm: T,
    /// Condition number of the weighted, column-scaled design matrix.
    pub condition_number: T,
    pub samples: usize,
}

impl<T: Real> AsymptoticFit<T> {
    pub fn coefficient(&self, exponent: T) -> Option<T> {
        self.exponents
            .iter()
            .position(|&e| e == exponent)
            .map(|i| self.coefficients[i])
    }

    /// The t^0 coefficient (zero when 0 is not among the exponents).
    pub fn finite_part(&self) -> T {
        self.coefficient(T::zero()).unwrap_or_else(T::zero)
    }

    /// Finite part in the Mellin sense: c_0 − γ_e·b.
    ///
    /// A term b·log t contributes −b/s² + γ_e b/s + … after multiplying the
    /// Mellin transform by 1/Γ(s), so the regularized value at s = 0 picks
    /// up −γ_e·b on top of the constant coefficient.
    pub fn mellin_finite_part(&self) -> T {
        self.finite_part() - euler_gamma::<T>() * self.log_coefficient.unwrap_or_else(T::zero)
    }
}

fn validate_exponents<T: Real>(exponents: &[T]) -> Result<()> {
    if exponents.is_empty() {
        return Err(Error::domain("at least one exponent is required"));
    }
    for &e in exponents {
        let twice = (e * T::two()).round();
        let ok = (e * T::two() - twice).abs() == T::zero()
            && twice
                .to_i32()
                .map(|k| ALLOWED_TWICE_EXPONENTS.contains(&k))
                .unwrap_or(false);
        if !ok {
            return Err(Error::domain(format!(
                "exponent {e} is not one of -1, -1/2, 0, 1/2, 1, 3/2"
            )));
        }
    }
    if exponents.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("exponents must be strictly increasing"));
    }
    Ok(())
}

/// Weighted least-squares fit of samples (t, v) to the basis t^e, e in
/// `exponents`, plus log t when `include_log` is set.
///
/// Rows are divided by t^{e_min} so that the leading singular behaviour does
/// not dominate the residual, and columns are scaled to unit norm before
/// solving. At least twice as many samples as basis functions are required.
pub fn fit_finite_part<T: Real>(
    points: &[(T, T)],
    exponents: &[T],
    include_log: bool,
) -> Result<AsymptoticFit<T>> {
    validate_exponents(exponents)?;
    let ncols = exponents.len() + usize::from(include_log);
    if points.len() < 2 * ncols {
        return Err(Error::domain(format!(
            "{} samples for {ncols} basis functions; at least {} needed",
            points.len(),
            2 * ncols
        )));
    }
    if points
        .iter()
        .any(|&(t, v)| !(t > T::zero()) || !t.is_finite() || !v.is_finite())
    {
        return Err(Error::domain("samples need t > 0 and finite values"));
    }
    let e_min = exponents[0].min(T::zero());
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(points.len());
    let mut rhs: Vec<T> = Vec::with_capacity(points.len());
    for &(t, v) in points {
        let w = t.powf(-e_min);
        let mut row: Vec<T> = exponents.iter().map(|&e| t.powf(e) * w).collect();
        if include_log {
            row.push(t.ln() * w);
        }
        rows.push(row);
        rhs.push(v * w);
    }
    let norms: Vec<T> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j] * r[j]).sum::<T>().sqrt())
        .collect();
    if norms.iter().any(|&n| n == T::zero()) {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let scaled: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().zip(&norms).map(|(x, n)| *x / *n).collect())
        .collect();
    let cond = condition_number(&scaled);
    if cond.to_f64_lossy() > FIT_CONDITION_LIMIT {
        return Err(Error::IllConditioned {
            condition: cond.to_f64_lossy(),
            limit: FIT_CONDITION_LIMIT,
        });
    }
    let y = least_squares(&scaled, &rhs).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::RankDeficient {
            condition: cond.to_f64_lossy(),
        },
        other => other,
    })?;
    let coef: Vec<T> = y.iter().zip(&norms).map(|(c, n)| *c / *n).collect();
    let residual_norm = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| {
            let fitted: T = r.iter().zip(&coef).map(|(x, c)| *x * *c).sum();
            (fitted - *b) * (fitted - *b)
        })
        .sum::<T>()
        .sqrt();
    let (coefficients, log_coefficient) = if include_log {
        (
            coef[..exponents.len()].to_vec(),
            Some(coef[exponents.len()]),
        )
    } else {
        (coef, None)
    };
    Ok(AsymptoticFit {
        exponents: exponents.to_vec(),
        coefficients,
        log_coefficient,
        residual_norm,
        condition_number: cond,
        samples: points.len(),
    })
}
