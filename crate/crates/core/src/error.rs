use alloc::string::String;
use core::fmt;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector or matrix had the wrong length for the operation.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// Matrix storage violates a structural invariant.
    InvalidMatrix(String),
    /// Response vector or dataset contents are unusable.
    InvalidData(String),
    /// An argument lies outside the domain of an entropy function.
    Domain { index: usize, value: f64 },
    /// A scalar parameter is out of range.
    InvalidParameter { name: &'static str, value: f64 },
    /// The penalty does not provide an exact proximal map.
    UnsupportedPenalty(&'static str),
    /// The response carries no signal at the origin, so no path can be built.
    EmptyPath,
    /// The reference solver hit its iteration cap.
    OracleFailure { iterations: usize, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, found {found}"),
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::InvalidData(msg) => write!(f, "invalid data: {msg}"),
            Error::Domain { index, value } => {
                write!(f, "entry {index} = {value} lies outside the entropy domain")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::UnsupportedPenalty(name) => {
                write!(f, "penalty `{name}` has no proximal map")
            }
            Error::EmptyPath => write!(f, "lambda_max is zero; the response carries no signal"),
            Error::OracleFailure {
                iterations,
                residual,
            } => write!(
                f,
                "reference solver did not converge after {iterations} iterations (kkt residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}
