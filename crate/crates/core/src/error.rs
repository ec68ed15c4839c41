use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix is not symmetric (entry ({row}, {col}) differs from its transpose)")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("shift matrix is shift-enabled; every commuting filter is a polynomial in it")]
    ShiftEnabled,
    #[error("eigenvalues are not distinct (minimum gap {gap:e})")]
    EigenvaluesNotDistinct { gap: f64 },
    #[error("division by the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("inconsistent edge weights for edge ({0}, {1})")]
    AsymmetricEdge(usize, usize),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
