use alloc::string::String;

use crate::C64;

/// Errors raised by kernel, metric and operator computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point outside the kernel domain: coordinate {coordinate} = {value} ({reason})")]
    Domain {
        coordinate: usize,
        value: C64,
        reason: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined pairing: zero kernel function")]
    UndefinedPairing,

    #[error("undefined distance: zero kernel function")]
    UndefinedDistance,

    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ill-conditioned Gram system (min eigenvalue {min_eigenvalue:e})")]
    Conditioning { min_eigenvalue: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    #[error("density routes disagree: finite differences {numeric}, analytic {analytic}")]
    Inconsistent { numeric: f64, analytic: f64 },

    #[error(
        "partition sum decreased under refinement ({previous} -> {next}); distance is not a metric"
    )]
    NonMonotone { previous: f64, next: f64 },

    #[error("inner distance {inner} fell below the direct distance {direct}")]
    InnerBelowDirect { inner: f64, direct: f64 },

    #[error("bound violated: {value} exceeds {bound}")]
    BoundViolated { value: f64, bound: f64 },

    #[error("pole: kernel function vanishes at the evaluation point")]
    Pole,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series truncation error estimate {0:e} exceeds 1e-8")]
    Truncation(f64),

    #[error("grid too coarse: {0}")]
    Resolution(&'static str),

    #[error("internal PSD violation: K(x,x) = {0}")]
    NotPositive(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
