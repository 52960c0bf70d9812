use thiserror::Error;

use crate::quantum::Convention;

/// Errors raised by matrix kernels, state/channel validation and the bound
/// computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has {rows}x{cols} shape but {len} entries were supplied")]
    BadShape { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace deviates from one by {0:e}")]
    TraceNotOne(f64),

    #[error("Hermitian eigensolver did not converge")]
    ConvergenceFailure,

    #[error("{convention} completeness violated (max residual {residual:e})")]
    CompletenessViolated { convention: Convention, residual: f64 },

    #[error("invalid Kraus operator count {count} (allowed 1..={max})")]
    InvalidCount { count: usize, max: usize },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid lattice indices (p={p}, q={q}) for dimension {dim}")]
    InvalidIndices { p: usize, q: usize, dim: usize },

    #[error("exhaustive search needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("mixing weight t={0} outside [0, 1]")]
    InvalidT(f64),

    #[error("{name}={value} outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("invalid grid specification: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
