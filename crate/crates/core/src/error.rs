use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("length {0} is not a perfect square")]
    NotSquareLength(usize),

    #[error("malformed basis: {0}")]
    MalformedBasis(String),

    #[error("basis is not orthonormal (max Gram defect {defect:e})")]
    NotOrthonormal { defect: f64 },

    #[error("matrix is not Hermitian (max defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("operator not normalized: tr(f*f) = {trace}")]
    NotNormalized { trace: f64 },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "not normalizable: eigenvalue {eigenvalue:e} below cutoff {cutoff:e} (rank {rank} < {dim})"
    )]
    NotNormalizable {
        eigenvalue: f64,
        cutoff: f64,
        rank: usize,
        dim: usize,
    },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    Indefinite { eigenvalue: f64 },

    #[error("matrix is not unitary (max defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not orthogonal (max defect {defect:e})")]
    NotOrthogonal { defect: f64 },

    #[error("outcome index {index} out of range (n² = {count})")]
    OutcomeOutOfRange { index: usize, count: usize },

    #[error("outcome {index} has zero probability ({probability:e})")]
    ZeroProbability { index: usize, probability: f64 },

    #[error("dimension {0} too large for the tripartite oracle (max 8)")]
    OracleTooLarge(usize),

    #[error("keys require a pure resource")]
    NotPure,

    #[error("random basis generation failed after {0} attempts")]
    DegenerateDraw(usize),

    #[error("configuration error: {0}")]
    Config(String),
}
