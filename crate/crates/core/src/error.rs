use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("{0} has not been verified")]
    Unverified(&'static str),

    /// A checker refused to set the `verified` flag; the report lists every violation.
    #[error("{subject} failed verification with {} violation(s)", .report.violations.len())]
    VerificationFailed { subject: String, report: Box<Report> },

    #[error("cochain degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("linear map is not a 1-cocycle")]
    NotACocycle,

    #[error("Id + f∘T is singular, so the 1-cocycle is not admissible")]
    NotAdmissible,

    #[error("operator is not a Nijenhuis operator")]
    NotNijenhuis,

    #[error("operator is not a Reynolds operator")]
    NotReynolds,

    #[error("linear map is not a derivation")]
    NotADerivation,

    #[error("undefined denominator at {0}")]
    UndefinedDenominator(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{location}: {message}")]
    Format { location: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed or unreadable input rather than by
    /// the mathematics; the CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Format { .. } | Error::Io { .. })
    }
}
