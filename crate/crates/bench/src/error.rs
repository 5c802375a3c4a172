use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("cell {problem} n={n}: {reason}")]
    BadCell {
        problem: String,
        n: usize,
        reason: front_descent::Error,
    },

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{}", path.display())]
    Csv { path: PathBuf, source: csv::Error },

    #[error("missing artifacts: {0}")]
    MissingArtifacts(String),

    #[error("{problem} n={n} has a single solver ({solver}); metrics need at least two")]
    SingleSolver {
        problem: String,
        n: usize,
        solver: String,
    },

    #[error("iteration {k}: {reason}")]
    Snapshot { k: usize, reason: String },

    #[error(transparent)]
    Core(#[from] front_descent::Error),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> BenchError {
    let path = path.into();
    move |source| BenchError::Io { path, source }
}
