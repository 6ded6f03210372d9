//! The end-to-end front-end: configuration, validation, and the fixed
//! pauses → segmentation → G2P → encoding stage order.

mod config;
mod engine;

pub use config::{PipelineConfig, ENV_PREFIX};
pub use engine::{
    validate_config, LineOutput, PipelineEngine, Severity, Stage, StageError, ValidationIssue,
    ValidationReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error(transparent)]
    Segment(#[from] crate::segment::SegmentError),
    #[error(transparent)]
    Pause(#[from] crate::pause::PauseError),
    #[error(transparent)]
    Phonology(#[from] crate::phonology::PhonologyError),
    #[error(transparent)]
    Encoding(#[from] crate::encoding::EncodingError),
}
