use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{kind} code {code} out of range (expected < {limit})")]
    CodeOutOfRange {
        kind: &'static str,
        code: u32,
        limit: u32,
    },

    /// Entropy and MI are undefined on an empty table; never reported as 0.
    #[error("undefined metric: {0} computed over an empty table")]
    UndefinedMetric(&'static str),

    #[error("insufficient baseline: need at least 2 signatures, got {0}")]
    InsufficientBaseline(usize),

    #[error("insufficient data: {what} needs at least {needed}, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("line {line}: field `{field}`: {msg}")]
    Parse {
        line: usize,
        field: String,
        msg: String,
    },

    #[error("line {line}: step index {t} does not follow {prev}")]
    Sequencing { line: usize, prev: u64, t: u64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("incompatible schema version {found} (this build reads version {expected})")]
    IncompatibleVersion { found: u32, expected: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
