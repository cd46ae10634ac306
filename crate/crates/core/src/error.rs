use thiserror::Error;

use crate::exactla::FieldSpec;
use crate::report::CheckReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("malformed scalar {text:?}: {reason}")]
    MalformedScalar { text: String, reason: String },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    /// An operation declined its input; the report carries the failed
    /// precondition and its witness.
    #[error("refused by {}: {}", .0.check, .0.message)]
    Refused(Box<CheckReport>),

    /// A membership solve was underdetermined, which can only happen when a
    /// non-degeneracy precondition was violated upstream.
    #[error("degeneracy leak: {0}")]
    DegeneracyLeak(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn refused(report: CheckReport) -> Self {
        Error::Refused(Box::new(report))
    }

    /// The report attached to a refusal, if any.
    pub fn report(&self) -> Option<&CheckReport> {
        match self {
            Error::Refused(r) => Some(r),
            _ => None,
        }
    }
}
