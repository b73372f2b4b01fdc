use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::kind`] sorts them into input errors, failed mathematical
/// preconditions and internal consistency failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("braid is not pure")]
    NotPure,
    #[error("longitude {index} has lower central series degree {degree}, need at least {required}")]
    AssumptionViolated {
        index: usize,
        degree: usize,
        required: usize,
    },
    #[error("index length {length} outside the admissible window for Milnor degree {degree}")]
    DegreeWindow { length: usize, degree: usize },
    #[error("element is not primitive in degree {degree}")]
    NotPrimitive { degree: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precondition,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::IndexOutOfRange { .. }
            | Error::RankMismatch { .. }
            | Error::Parse(_)
            | Error::InvalidInput(_) => ErrorKind::Input,
            Error::NotPure
            | Error::AssumptionViolated { .. }
            | Error::DegreeWindow { .. }
            | Error::NotPrimitive { .. }
            | Error::Precondition(_) => ErrorKind::Precondition,
            Error::Consistency(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
