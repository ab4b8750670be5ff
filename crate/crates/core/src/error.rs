use thiserror::Error;

/// Errors raised across the library.
///
/// The CLI maps these onto exit codes: parse errors to 1, invalid
/// parameters to 2, size caps to 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{what}: size {got} exceeds the supported maximum {max}")]
    SizeCap {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, got: usize, max: usize) -> Result<()> {
    if got > max {
        Err(Error::SizeCap { what, got, max })
    } else {
        Ok(())
    }
}
