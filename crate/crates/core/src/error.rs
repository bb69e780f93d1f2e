use thiserror::Error;

/// Errors produced by the environment and its tooling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("generation failed: {0}")]
    GenerationFailure(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("action {0} is not available in this episode")]
    IllegalAction(String),

    #[error("no path from {from} to {to}")]
    NoPath { from: String, to: String },

    #[error("trajectory line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("incompatible trajectory version {found} (expected {expected})")]
    IncompatibleVersion { found: u32, expected: u32 },

    #[error("replay mismatch at step {step}: {field}")]
    ReplayMismatch { step: usize, field: String },

    #[error("episode {episode} (seed {seed}) failed: {source}")]
    Episode {
        episode: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("png encoding: {0}")]
    Png(#[from] png::EncodingError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
