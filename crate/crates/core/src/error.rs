use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("space mismatch in degree {degree}: {detail}")]
    SpaceMismatch { degree: i64, detail: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("d∘d is nonzero starting in degree {0}")]
    DSquaredNonzero(i64),

    #[error("not a chain map: fails in degree {0}")]
    NotChainMap(i64),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("arity mismatch: expected {expected}, found {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("invalid shuffle: {0}")]
    InvalidShuffle(String),

    #[error("arity {arity} exceeds the truncation cap {cap}")]
    ArityOverflow { arity: usize, cap: usize },

    #[error("invalid cooperad: {0}")]
    InvalidCooperad(String),

    #[error("not equivariant: {0}")]
    NotEquivariant(String),

    #[error("not a coderivation: {0}")]
    NotCoderivation(String),

    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
