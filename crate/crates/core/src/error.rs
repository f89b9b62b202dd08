//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by parsing, validation, enumeration and verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A token could not be parsed (bad syntax), with its 0-based index.
    Syntax { token: usize, msg: String },
    /// A structural invariant of the input failed (strand counts, component
    /// count, index ranges, ...).
    Validation(String),
    /// A resource limit was exceeded (disk count, augmentation search space).
    CapExceeded(String),
    /// An identity that must hold for a correct construction failed. Carries
    /// a witness description.
    Verify(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { token, msg } => write!(f, "syntax error at token {token}: {msg}"),
            Error::Validation(msg) => write!(f, "invalid front: {msg}"),
            Error::CapExceeded(msg) => write!(f, "resource cap exceeded: {msg}"),
            Error::Verify(msg) => write!(f, "verification failure: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
