use thiserror::Error;

/// Errors raised by signal synthesis, detection, reconstruction and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// No sign change of the residual inside the bracket of crossing `n`.
    ///
    /// Under valid probe parameters this cannot happen; it means the signal's
    /// declared supremum bound is wrong.
    #[error("no crossing found in rectangle n={n}: residual does not change sign")]
    DetectionFailure { n: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Crossings `[missing_lo, missing_hi]` are needed but not available.
    #[error("insufficient crossing coverage{}: indices {missing_lo}..={missing_hi} are missing (have {have_lo}..={have_hi})",
        .grid_index.map(|i| format!(" for grid index n1={i}")).unwrap_or_default())]
    Coverage {
        grid_index: Option<i64>,
        missing_lo: i64,
        missing_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },

    #[error("noise realization exceeded the probe amplitude after {attempts} attempts")]
    NoiseRetriesExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Attaches the output-grid index to a coverage error.
    pub(crate) fn at_grid_index(self, n1: i64) -> Self {
        match self {
            Error::Coverage {
                missing_lo,
                missing_hi,
                have_lo,
                have_hi,
                ..
            } => Error::Coverage {
                grid_index: Some(n1),
                missing_lo,
                missing_hi,
                have_lo,
                have_hi,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
