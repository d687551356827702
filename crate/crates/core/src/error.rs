use thiserror::Error;

/// Errors raised by the exact-arithmetic constructions.
///
/// Every variant maps to a stable string code (see [`Error::code`]) that the
/// command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    /// A contract of a construction was violated by its input, e.g. a matrix
    /// that was required to lie in a commutant does not.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("placement capacity exceeded in strip {strip} ({class}): need {needed}, have {available}")]
    Capacity {
        strip: usize,
        class: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconsistent linear system")]
    NoSolution,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Singular(_) => "singular",
            Error::Contract(_) => "contract",
            Error::Capacity { .. } => "capacity",
            Error::Precondition(_) => "precondition",
            Error::NoSolution => "no-solution",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
