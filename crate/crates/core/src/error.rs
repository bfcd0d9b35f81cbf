use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("relation is not monic in variable {var}")]
    NotMonic { var: usize },

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("point is singular on the curve")]
    SingularPoint,

    #[error("local parameter is not a coordinate at the point: {0}")]
    BadLocalParameter(String),

    #[error("power series precision cap {cap} exceeded")]
    PrecisionCap { cap: usize },

    #[error("section vanishes identically modulo the relation")]
    ZeroSection,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("empty input")]
    EmptyInput,

    #[error("polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown case study `{0}`")]
    UnknownCase(String),

    #[error("point is not on the elliptic curve")]
    PointNotOnCurve,

    #[error("degree mismatch: divisor has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u64, found: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that signal a failed computation rather than bad input.
    pub fn is_computational(&self) -> bool {
        matches!(
            self,
            Error::PrecisionCap { .. } | Error::Inconsistent(_) | Error::SingularPoint
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
