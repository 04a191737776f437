//! Orchestration for the transport-mode detection toolkit.
//!
//! Wires the core stages (ingest, calibration, feature assembly, ranking,
//! cross-validated evaluation) behind a single config, and emits delimited
//! text reports that rerun byte-identically under a fixed seed.

pub mod config;
pub mod report;
pub mod stages;

use thiserror::Error;

/// Any stage failure, tagged with the stage that raised it so CLI users
/// can tell where a run died.
#[derive(Debug, Error)]
#[error("{stage}: {message}")]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

impl StageError {
    pub fn new(stage: &'static str, message: impl Into<String>) -> Self {
        StageError {
            stage,
            message: message.into(),
        }
    }
}

/// Maps any displayable error into a stage-tagged one.
pub fn at_stage<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> StageError {
    move |e| StageError::new(stage, e.to_string())
}

pub type Result<T> = std::result::Result<T, StageError>;
