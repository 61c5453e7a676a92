use std::path::PathBuf;

use crate::exact::Variable;

/// Errors raised across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("variable mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Variable, found: Variable },

    #[error("incompatible prefactors: {0}")]
    IncompatiblePrefactors(String),

    #[error("{what} is undefined at u = {at}")]
    DomainError { what: &'static str, at: f64 },

    #[error("the {0} family has no virtual states")]
    UnsupportedFamily(&'static str),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParameters(Vec<String>),

    #[error("singular deformation: {0}")]
    SingularDeformation(String),

    #[error("no classically allowed region at E = {energy}")]
    NoClassicalRegion { energy: f64 },

    #[error("quadrature did not converge on [{a}, {b}] after {nodes} nodes")]
    QuadratureNonConvergence { a: f64, b: f64, nodes: usize },

    #[error("spectrum truncation: level {level} moved by {relative:.3e} (relative) when the box shrank")]
    TruncationError { level: usize, relative: f64 },

    #[error("scenario parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
