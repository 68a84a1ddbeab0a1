use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field degree {0} outside the supported range 2..=24")]
    FieldDegree(u32),

    #[error("polynomial {poly:#b} is not a primitive polynomial of degree {degree}")]
    NotPrimitive { poly: u64, degree: u32 },

    #[error("{deg} does not divide {of}")]
    NotDivisor { deg: u32, of: u32 },

    #[error("element {bits:#x} does not lie in the subfield of degree {deg}")]
    NotInSubfield { bits: u32, deg: u32 },

    /// One of the tower constraints on (m, n, d, e, k) is violated.
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive search would exceed its configured cost gate.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Two computations that must agree did not, or an exact division left a remainder.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// An enumerated object contradicts a proven structural statement.
    #[error("violation: {0}")]
    Violation(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    ///
    /// 1 = mismatch or violation, 2 = usage or invalid parameters, 3 = budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) | Error::Violation(_) => 1,
            Error::Budget(_) => 3,
            Error::FieldDegree(_)
            | Error::NotPrimitive { .. }
            | Error::NotDivisor { .. }
            | Error::NotInSubfield { .. }
            | Error::InvalidParams(_)
            | Error::InvalidArgument(_) => 2,
        }
    }
}
