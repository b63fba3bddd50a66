use thiserror::Error;

/// Errors produced by the library.
///
/// Variants fall into two classes: domain errors (bad arguments, violated
/// preconditions) and numerical-quality errors (an accuracy or conditioning
/// contract could not be met). [`Error::is_domain`] tells them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cutoff too small: cutoff * t_min = {product:.3} < {required}")]
    CutoffTooSmall { product: f64, required: f64 },

    #[error("spectrum table is empty (cutoff {cutoff} below first eigenvalue)")]
    EmptySpectrum { cutoff: f64 },

    #[error("design matrix is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("ill-conditioned fit (condition number {condition:.3e} > {limit:.1e}); choose a different t-grid")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("numerical quality contract violated: {0}")]
    Quality(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True when the error stems from invalid input rather than a numerical
    /// accuracy failure.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::CutoffTooSmall { .. } | Error::EmptySpectrum { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
