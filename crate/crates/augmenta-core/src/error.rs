//! Crate-wide error type.
//!
//! Variants are grouped so callers can tell input/configuration problems
//! (bad files, bad flags, unmapped labels) apart from backend failures
//! (model unavailable, prediction failed, contract broken). The CLI maps
//! the former to exit code 1 and the latter to exit code 2.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed content in an input file, with the 1-based line number.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("label {value} outside {{0, 1, 2}}")]
    LabelRange { value: i64 },

    #[error("unmapped fine-grained labels: {}", names.join(", "))]
    UnmappedLabels { names: Vec<String> },

    /// Text that the TSV format cannot carry without corruption.
    #[error("example {id}: text contains a tab or newline; TSV cannot represent it, write JSONL instead")]
    TsvUnrepresentable { id: String },

    #[error("configuration error: {0}")]
    Config(String),

    /// An external model backend that cannot be reached or instantiated.
    /// Distinct from `Config` so callers can report it as a backend
    /// failure rather than an input error.
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("backend failure: {0}")]
    Backend(String),

    /// A backend returned something its contract forbids (empty word,
    /// word with whitespace, overlapping entity spans, ...).
    #[error("backend contract violation: {0}")]
    BackendContract(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Per-example augmentation failure carrying the example id, so
    /// dataset-level wrappers can skip and report it.
    #[error("augmentation failed for example {id}: {source}")]
    Augmentation {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn for_example(self, id: &str) -> Self {
        Error::Augmentation {
            id: id.to_string(),
            source: Box::new(self),
        }
    }

    /// True for failures of a model backend as opposed to bad input.
    pub fn is_backend_failure(&self) -> bool {
        match self {
            Error::Backend(_) | Error::BackendUnavailable(_) | Error::BackendContract(_) => true,
            Error::Augmentation { source, .. } => source.is_backend_failure(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
