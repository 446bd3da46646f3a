use std::fmt;

/// Errors produced by domain construction, restriction, and the exact
/// engines' size guards.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two points (or a point and a domain) disagree on dimension count.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate fell outside `[1, size]` for its dimension.
    CoordOutOfRange { dim: usize, coord: usize, size: usize },
    /// A dense table (or the domain itself) would exceed the materialization cap.
    DomainTooLarge { points: u128, cap: u128 },
    /// The operation requires a dense value table.
    NotDense(&'static str),
    /// An exact engine refused an input that is too large to enumerate.
    Refused(String),
    /// Malformed input (parse errors, bad parameters).
    InvalidInput(String),
    /// An internal consistency check failed; indicates an invalid matching
    /// or a non-monotone quantile callback.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::CoordOutOfRange { dim, coord, size } => {
                write!(f, "coordinate {coord} out of range [1, {size}] in dimension {dim}")
            }
            Error::DomainTooLarge { points, cap } => {
                write!(f, "domain of {points} points exceeds cap of {cap}")
            }
            Error::NotDense(op) => write!(f, "{op} requires a dense value table"),
            Error::Refused(msg) => write!(f, "refused: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
