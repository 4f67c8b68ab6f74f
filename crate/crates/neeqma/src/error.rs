use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("qubit count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for {nqubits} qubits")]
    QubitOutOfRange { index: usize, nqubits: usize },

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("shot count must be >= 1")]
    InvalidShots,

    #[error("state is not a computational basis state")]
    NotBasisState,

    #[error("underdetermined fit: {needed} parameters but only {got} rows")]
    Underdetermined { needed: usize, got: usize },

    #[error("rank-deficient design matrix: basis column {column} is dependent")]
    RankDeficient { column: usize },

    #[error("missing fit parameter `{0}`")]
    MissingParam(String),

    #[error("no phase-angle list for degree {0}")]
    MissingDegree(usize),

    #[error("invalid bounds: lower {lo} > upper {hi}")]
    InvalidBounds { lo: f64, hi: f64 },

    #[error("eigensolver did not converge after {0} sweeps")]
    NonConvergence(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
