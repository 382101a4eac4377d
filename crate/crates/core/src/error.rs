use thiserror::Error;

use crate::vector::IntVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no primitive representative of the zero vector")]
    ZeroVector,
    #[error("mixed ranks: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension {0} is not supported (at most {max})", max = crate::polytope::MAX_DIM)]
    UnsupportedDimension(usize),
    #[error("reflexivity undefined: polytope is {dim}-dimensional in rank {rank}")]
    ReflexivityUndefined { dim: usize, rank: usize },
    #[error("polar unbounded: origin is not an interior point")]
    PolarUnbounded,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("rays do not span: origin is not interior to the hull of the rays")]
    RaysNotSpanning,
    #[error("{0} is not primitive")]
    NotPrimitive(IntVector),
    #[error("{0} lies outside the support of the fan")]
    OutsideSupport(IntVector),
    #[error("non-pure fan: maximal cone {0} is not full-dimensional")]
    NonPureFan(usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("delta not in anticanonical polar: <{m}, {u}> = {pairing} < -1")]
    NotInAnticanonicalPolar {
        m: IntVector,
        u: IntVector,
        pairing: i64,
    },
    #[error("resolution polytope unreachable: {0}")]
    ResolutionUnreachable(String),
    #[error("weights must be positive with gcd 1: {0:?}")]
    InvalidWeights(Vec<i64>),
    #[error("not an anticanonical monomial: {0:?}")]
    NotAnticanonicalMonomial(Vec<i64>),
    #[error("point {0} is not in the polar of the hull of the rays")]
    NotAnticanonicalPoint(IntVector),
    #[error("containment violated: <{m}, {u}> = {pairing} < -1")]
    ContainmentViolated {
        m: IntVector,
        u: IntVector,
        pairing: i64,
    },
    #[error(
        "mirror fan not complete: the given points do not span with the origin in their interior"
    )]
    MirrorFanNotComplete,
    #[error("not weighted homogeneous: {0}")]
    NotWeightedHomogeneous(String),
    #[error("matrix is not square and invertible")]
    SingularMatrix,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
