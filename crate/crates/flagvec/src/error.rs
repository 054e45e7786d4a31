//! Error taxonomy shared by the whole crate.
//!
//! Three families, matching the process exit codes of the `flagvec` binary:
//!
//! * [`Error::Input`] (exit 2): malformed files, out-of-range vertices,
//!   invalid group tables, words outside a declared ambient.
//! * [`Error::Resource`] (exit 3): a computation was refused because a
//!   guard (family size, permutation count, recursion budget) would be
//!   exceeded.  The message says which guard and what the limit is.
//! * [`Error::Internal`] (exit 4): an invariant the library promises was
//!   violated.  These indicate a bug, never bad user input.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Resource(_) => 3,
            Error::Internal(_) => 4,
        }
    }

    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }

    /// Input error tagged with a file name and 1-based line number.
    pub fn input_at(file: &str, line: usize, msg: impl std::fmt::Display) -> Error {
        Error::Input(format!("{file}:{line}: {msg}"))
    }

    pub fn resource(msg: impl Into<String>) -> Error {
        Error::Resource(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Error {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
