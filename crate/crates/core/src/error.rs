use thiserror::Error;

use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{family} not applicable: {reason}")]
    NotApplicable { family: String, reason: String },
    #[error("required truncation {required} exceeds ceiling {ceiling}")]
    TruncationCeiling { required: usize, ceiling: usize },
    #[error("truncation {given} is below the minimum {minimum}")]
    TruncationTooSmall { given: usize, minimum: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
