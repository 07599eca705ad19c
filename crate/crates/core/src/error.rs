use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown language: {0}")]
    UnknownLanguage(String),

    #[error("undecodable content in {path}: {reason}")]
    Undecodable { path: String, reason: String },

    #[error("document {path} has origin {found} but dataset role {role} requires {expected}")]
    OriginMismatch {
        path: String,
        found: String,
        role: String,
        expected: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("sequence is already tagged with a language control code")]
    AlreadyTagged,

    #[error("empty identifier")]
    EmptyIdentifier,

    #[error("placeholder <var-{0}> has no entry in the copy map")]
    MissingPlaceholder(usize),

    #[error("sequence of length {len} exceeds context length {max}")]
    SequenceTooLong { len: usize, max: usize },

    #[error("token id {id} out of range for vocabulary of size {size}")]
    TokenOutOfRange { id: u32, size: usize },

    #[error("every position is masked")]
    AllMasked,

    #[error("non-finite gradient in {tensor} (first bad index {index})")]
    NonFiniteGradient { tensor: String, index: usize },

    #[error("vocabulary mismatch: {0}")]
    VocabMismatch(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
