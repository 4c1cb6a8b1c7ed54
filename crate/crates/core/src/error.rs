use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidCartanType(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} exceeds cap {cap} ({detail})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        detail: String,
    },

    /// A structural identity that must hold by construction failed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("slice mismatch: {0}")]
    SliceMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
