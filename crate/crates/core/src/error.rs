use thiserror::Error;

use crate::exactmath::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("not positive definite: leading minor {minor} has non-positive pivot {pivot}")]
    NotPositiveDefinite { minor: usize, pivot: Rational },

    #[error("zero pivot at index {index} with nonzero entries below")]
    SingularPivot { index: usize },

    #[error("isqrt_floor of negative value {0}")]
    NegativeSqrt(Rational),

    #[error("negative squared radius {0}")]
    NegativeRadius(Rational),

    #[error("points are not full-dimensional: affine rank {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("point set has nullspace dimension {0}, expected 1")]
    NotUniquelyDetermined(usize),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("orbit {text:?}: {reason}")]
    Orbit { text: String, reason: String },

    #[error("catalog line {line}: {reason}")]
    Catalog { line: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
