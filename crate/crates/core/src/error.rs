use faer::c64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has zero dimension")]
    EmptyMatrix,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver failed: {0}")]
    EigFailure(String),
    #[error("left/right eigenvector systems are degenerate")]
    DegenerateSystem,
    #[error("matrix is not diagonalizable (condition number {diag_score:e})")]
    NonDiagonalizable { diag_score: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is not self-adjoint (relative residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("matrix is not invertible (smallest singular value {min_singular_value:e})")]
    NotInvertible { min_singular_value: f64 },
    #[error("eigenvalue {0} has no complex-conjugate partner")]
    UnpairedEigenvalue(c64),
    #[error("spectrum has complex-conjugate pairs, no positive-definite metric exists")]
    NoPositiveMetric,
    #[error("operator is not an element of E(H) (intertwining residual {residual:e})")]
    NotAMetric { residual: f64 },
    #[error("operator does not commute with H (relative commutator {residual:e})")]
    NotCommuting { residual: f64 },
    #[error("expected {expected} signs, one per real eigenvalue, found {found}")]
    SignCountMismatch { expected: usize, found: usize },
    #[error("no eigenvector has a real eigenvalue")]
    EmptyPhysicalSpace,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("states live on different grids")]
    GridMismatch,
    #[error("states are given at different times ({0} vs {1})")]
    TimeMismatch(f64, f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
}
