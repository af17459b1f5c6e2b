use alloc::string::String;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("improper intersection: {0}")]
    ImproperIntersection(String),
    #[error("twist lies in the bad locus Υ")]
    Upsilon,
    #[error("intersection cycle meets the toric boundary")]
    BoundaryIntersection,
    #[error("boundary intersections persist after {0} coordinate changes")]
    BoundaryArtifact(usize),
    #[error("unbounded domain")]
    Unbounded,
    #[error("coefficient is not a rational multiple of a root of unity")]
    NonRationalCoefficient,
    #[error("place {0} is bad for this problem")]
    BadPlace(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
