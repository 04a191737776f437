//! Shared error type for the pipeline stages.

use crate::channel::ChannelId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing channel: {0}")]
    MissingChannel(ChannelId),

    #[error("invalid label: {0:?}")]
    InvalidLabel(String),

    #[error("degenerate labels: at least two classes required")]
    DegenerateLabels,

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("label/epoch alignment error: {0}")]
    Alignment(String),

    #[error("row width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
