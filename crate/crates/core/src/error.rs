use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported polynomial degree {0} (supported: 1..=16)")]
    UnsupportedDegree(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("undefined wavenumber: omega must be nonzero")]
    UndefinedWavenumber,

    #[error("sponge geometry mismatch: {0}")]
    Geometry(String),

    #[error("singular factorization at row {row}")]
    SingularFactorization { row: usize },

    #[error("iterative solver did not converge: {iterations} iterations, relative residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("non-finite wave function at step {step} (t = {time})")]
    NumericAbort { step: usize, time: f64 },

    #[error("scenario error at `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
