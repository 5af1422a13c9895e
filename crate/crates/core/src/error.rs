use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom-cavity coupling must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("coupling must be non-negative, got {0}")]
    NegativeCoupling(f64),
    #[error("{what} must be finite, got {value}")]
    NotFinite { what: &'static str, value: f64 },
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
    #[error("|tau| = {tau} exceeds the supported range {max}")]
    RangeExceeded { tau: f64, max: f64 },
    #[error("eigensolver did not converge")]
    EigensolverFailure,
    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),
    #[error("series has {values} values for a grid of {points} points")]
    LengthMismatch { values: usize, points: usize },
    #[error("concurrence series is empty")]
    EmptySeries,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("fiber length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("nu_bar must be non-negative, got {0}")]
    NegativeDecayRate(f64),
    #[error("detuning must be nonzero")]
    ZeroDetuning,
    #[error("sweep needs at least one r value")]
    EmptySweep,
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NotFinite { what, value })
    }
}
