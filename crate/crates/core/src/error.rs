use std::fmt;

/// Errors shared across the whole crate.
///
/// Precision errors are recoverable: callers that own the source data
/// retry with wider windows (see [`crate::precision::Precision`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A requested coefficient or valuation lies outside the guaranteed
    /// window of a truncated series. Carries a short description of what
    /// was being read.
    InsufficientPrecision(String),
    /// Ghost-component recovery hit a division by p that was not exact.
    /// On valid inputs this cannot happen; it signals either corrupted
    /// ghost data or an internal bug.
    NonIntegralGhost,
    /// A substitution target does not satisfy the valuation constraints
    /// of an admissible parameter change.
    InvalidParameterChange(String),
    /// The point does not lie on the curve.
    NotOnCurve,
    /// The tangent cone at the point has a repeated factor; only ordinary
    /// multiple points are supported.
    UnsupportedSingularity,
    /// The curve divides a numerator or denominator of one of the input
    /// functions, so restriction to the curve is undefined.
    CurveInSupport,
    /// An operation that requires a nonzero value received zero.
    ZeroInput(String),
    /// Elements from mismatched rings were combined.
    RingMismatch(String),
    /// Malformed textual or JSON input.
    Parse(String),
    /// A structurally valid input violates a documented precondition
    /// (non-prime p, inhomogeneous polynomial, degree cap, ...).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientPrecision(what) => {
                write!(f, "insufficient precision: {what}")
            }
            Error::NonIntegralGhost => {
                write!(f, "ghost recovery required a non-exact division by p")
            }
            Error::InvalidParameterChange(what) => {
                write!(f, "invalid parameter change: {what}")
            }
            Error::NotOnCurve => write!(f, "point does not lie on the curve"),
            Error::UnsupportedSingularity => {
                write!(f, "tangent cone has repeated factors; only ordinary multiple points are supported")
            }
            Error::CurveInSupport => {
                write!(f, "curve divides a numerator or denominator of an input function")
            }
            Error::ZeroInput(what) => write!(f, "zero input: {what}"),
            Error::RingMismatch(what) => write!(f, "ring mismatch: {what}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: 2 for bad input, 3 for precision exhaustion
    /// or unsupported geometry, 1 is reserved for a failed reciprocity law.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientPrecision(_)
            | Error::NonIntegralGhost
            | Error::UnsupportedSingularity => 3,
            _ => 2,
        }
    }
}
