use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("cell {cell} cannot be classified: interface feature is smaller than the sampling resolution")]
    AmbiguousCell { cell: usize },

    #[error("cell {cell} has no height direction for cut quadrature")]
    NoHeightDirection { cell: usize },

    #[error("point ({x}, {y}) is outside the covering mesh")]
    PointOutsideMesh { x: f64, y: f64 },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("static problem needs a Dirichlet boundary")]
    NoDirichletBoundary,

    #[error("non-finite result: {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
