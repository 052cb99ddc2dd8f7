use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Cholesky pivot fell below `1e-14 * max diagonal`.
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// A window of the covariance estimate could not be inverted.
    #[error(
        "window [{win_start}, {win_end}) for block size m={m}, offset l={l} is not positive definite"
    )]
    SingularWindow {
        m: usize,
        l: isize,
        win_start: usize,
        win_end: usize,
    },

    /// A rank-1 inverse update hit a non-positive Schur complement.
    #[error("degenerate rank-1 update (pivot {pivot:e})")]
    DegenerateUpdate { pivot: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no observations")]
    EmptyData,

    #[error("p = {p} is too small for block sizes up to {max_m} (need p >= {needed})")]
    InsufficientRange { p: usize, max_m: usize, needed: usize },

    #[error("unknown plot axis `{0}` (expected log_p or n_rate)")]
    InvalidAxis(String),

    #[error("nothing to plot")]
    EmptyInput,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("trial failed ({context}): {source}")]
    Trial {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the numbers rather than by the inputs' shape or the filesystem.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotPositiveDefinite { .. }
            | Error::SingularWindow { .. }
            | Error::DegenerateUpdate { .. } => true,
            Error::Trial { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
