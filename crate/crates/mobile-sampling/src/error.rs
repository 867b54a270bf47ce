//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Numerical estimators report their quality through their report types
/// (standard errors, bias direction, clip counters); `Error` is reserved for
/// contract violations: bad inputs, unsupported dimensions, and queries a
/// routine refuses to answer rather than answer badly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {dim}: this routine handles {min} <= d <= {max}")]
    UnsupportedDimension { dim: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("direction must be a unit vector (got |theta| = {norm:.6e})")]
    NonUnitDirection { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "query radius {radius} is below the resolution floor {floor} of this \
         discrete measure; measurements below ~3x the discretization scale are refused"
    )]
    SubResolutionQuery { radius: f64, floor: f64 },

    #[error("membership for this body is approximate only; use a ball or box base")]
    ApproximateMembership,

    #[error("slice is numerically zero on the scan grid (max |g| = {grid_max:.3e})")]
    DegenerateSlice { grid_max: f64 },

    #[error("synthesis retries exhausted; last anchor value was |f(0)| = {last_center:.6e}")]
    SynthesisFailed { last_center: f64 },

    #[error("the function vanishes at the expansion center; the radial zero count integral diverges")]
    ZeroAtCenter,

    #[error(
        "complex evaluation too far off the real axis: |Im z| = {im:.3e} exceeds \
         the overflow guard {limit:.3e} for spectral radius {radius:.3e}"
    )]
    EvaluationOverflow { im: f64, limit: f64, radius: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
