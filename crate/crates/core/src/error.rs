use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration is inconsistent or violates a stability bound.
    #[error("configuration error: {0}")]
    Config(String),

    /// Structured input was read but violates a model invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// Input data is malformed or unusable (corrupt dataset, bad CSV row).
    #[error("data error: {0}")]
    Data(String),

    #[error("missing inputs: {}", .0.join(", "))]
    MissingInputs(Vec<String>),

    #[error("i/o error on {path}: {source}")]
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
