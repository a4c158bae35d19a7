use thiserror::Error;

/// Failure modes shared across the crate. Precondition violations carry the
/// measured quantity so callers can report how far an input was from valid.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} exceeds the dense cap {cap}")]
    TooManyQubits { n: usize, cap: usize },

    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("pair endpoints coincide at site {site}")]
    CoincidentPair { site: usize },

    #[error("term {term}: {msg}")]
    InvalidTerm { term: usize, msg: String },

    #[error("segment {segment}: {msg}")]
    InvalidSegment { segment: usize, msg: String },

    #[error("matrix dimension {dim} is not 2^{n}")]
    DimensionMismatch { dim: usize, n: usize },

    #[error("twice_j={twice_j} is invalid for n={n} (parity or range)")]
    InvalidSector { n: usize, twice_j: usize },

    #[error("body label l={l} must be even")]
    OddBodyLabel { l: usize },

    #[error("body label l={l} out of range for n={n}")]
    BodyLabelRange { l: usize, n: usize },

    #[error("no commutator program for l={l}; need even l >= 4")]
    ProgramRange { l: usize },

    #[error("operator is not Hermitian: residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("operator is not rotationally symmetric: max commutator norm {norm:.3e} exceeds {tol:.3e}")]
    NotSymmetric { norm: f64, tol: f64 },

    #[error("operator is not skew-Hermitian: residual {residual:.3e}")]
    NotSkewHermitian { residual: f64 },

    #[error("coupling locality k={k} out of range 2..={n}")]
    LocalityRange { k: usize, n: usize },

    #[error("matrix is not unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("expected an integer value in {context}, found {found}")]
    NonInteger { context: String, found: String },

    #[error("partial trace keep set is empty or repeats indices")]
    BadKeepSet,

    #[error("fit degree {degree} exceeds maximum {max} for n={n}")]
    DegreeTooLarge { degree: usize, max: usize, n: usize },

    #[error("operation requires an even qubit count, got n={n}")]
    EvenQubitsRequired { n: usize },

    #[error("{what} did not converge within {limit} rounds")]
    NotConverged { what: String, limit: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
