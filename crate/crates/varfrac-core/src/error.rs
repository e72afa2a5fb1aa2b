//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors reported by the numeric kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidInput(String),
    /// Two sampled objects were expected to live on the same grid.
    GridMismatch,
    /// A least-squares fit had no usable spread in its inputs.
    DegenerateFit(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for precondition failures.
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::GridMismatch => write!(f, "sampled inputs do not share a grid"),
            Error::DegenerateFit(what) => write!(f, "degenerate fit: {what}"),
        }
    }
}

impl core::error::Error for Error {}
