use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate id `{id}` (line {line})")]
    DuplicateId { id: String, line: usize },

    #[error("{0}: corpus is empty")]
    EmptyCorpus(String),

    #[error("language mismatch: `{left}` is {left_lang}, `{right}` is {right_lang}")]
    LanguageMismatch {
        left: String,
        left_lang: String,
        right: String,
        right_lang: String,
    },

    #[error("id mismatch: `{0}` has no aligned counterpart")]
    IdMismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid variant `{0}`")]
    InvalidVariant(String),

    #[error("invalid regime spec: {0}")]
    InvalidRegime(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
