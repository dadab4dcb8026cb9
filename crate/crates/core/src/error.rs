use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants are grouped so a front end can map them onto a small set of
/// exit codes with [`Error::kind`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cap exceeded: {what} ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("product of the entries is not in the commutator subgroup")]
    PsiNonzero,

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("no character table available for this group: {0}")]
    MissingTable(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("homomorphism check failed: {0}")]
    NotHomomorphism(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("lattice is not contained in the ambient lattice")]
    NotContained,

    #[error("non-integral value: {0}")]
    NonIntegral(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// An internal consistency check failed. Seeing this means a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Cap,
    InvalidData,
    MissingTable,
    Other,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::CapExceeded { .. } | Error::OutOfRange(_) => ErrorKind::Cap,
            Error::PsiNonzero
            | Error::InvalidData(_)
            | Error::NotSubgroup(_)
            | Error::GroupMismatch
            | Error::NotHomomorphism(_) => ErrorKind::InvalidData,
            Error::MissingTable(_) => ErrorKind::MissingTable,
            _ => ErrorKind::Other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
