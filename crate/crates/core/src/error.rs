use alloc::string::String;
use core::fmt;

/// Failure modes shared by every numerical kernel in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the documented domain.
    InvalidArgument(String),
    /// A momentum has no well-defined direction where one is required.
    DegenerateMomentum(String),
    /// Computed quantities drifted away from an invariant they must satisfy.
    InternalConsistency(String),
    /// A numerical routine produced a result outside its trusted regime.
    NumericalInstability(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DegenerateMomentum(msg) => write!(f, "degenerate momentum: {msg}"),
            Error::InternalConsistency(msg) => write!(f, "internal consistency: {msg}"),
            Error::NumericalInstability(msg) => write!(f, "numerical instability: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
