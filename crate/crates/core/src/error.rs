use thiserror::Error;

/// Errors produced by the analysis routines.
///
/// Indices carried by variants are 0-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with positive dimension: got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation needs n >= {min}, got n = {n}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid relation set: {0}")]
    InvalidRelation(String),

    #[error("relation set is not transitive: ({i}, {j}) and ({j}, {k}) present but ({i}, {k}) missing")]
    NotTransitive { i: usize, j: usize, k: usize },

    #[error("zero entry at ({row}, {col}) excludes strict sign-symmetry")]
    ZeroEntry { row: usize, col: usize },

    #[error("negative diagonal entry at index {index}")]
    NegativeDiagonal { index: usize },

    #[error("sign pattern admits no bipartition; witness cycle {cycle:?}")]
    SignConflict { cycle: Vec<usize> },

    #[error("partition universe has size {found}, expected {expected}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("enumeration limited to n <= {max}, got {n}")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("eigensolver did not converge after {iterations} iterations ({converged} of {n} eigenvalues found)")]
    ConvergenceFailure {
        iterations: usize,
        converged: usize,
        n: usize,
    },

    #[error("matrix is reducible")]
    NotIrreducible,

    #[error("imprimitivity index disagreement: spectral count {spectral}, cycle gcd {graph}")]
    MethodDisagreement { spectral: usize, graph: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
