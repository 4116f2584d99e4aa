use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scenario value is missing, malformed or violates an invariant.
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Toml(#[from] toml::de::Error),

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: csv::Error },

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Compute {
        context: String,
        source: qfho_core::Error,
    },

    /// The comparison ran to completion but missed at least one threshold.
    #[error("comparison failed: {0}")]
    ThresholdsFailed(String),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Wraps a core error, promoting argument violations to configuration
    /// errors under their field path.
    pub fn compute(context: impl Into<String>, source: qfho_core::Error) -> Self {
        match source {
            qfho_core::Error::InvalidArgument { field, reason } => Error::config(field, reason),
            source => Error::Compute {
                context: context.into(),
                source,
            },
        }
    }

    /// Process exit code: 1 for usage and configuration problems, 2 for
    /// physics-domain failures (caustics, boundary contact, coarse grids,
    /// missed comparison thresholds).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Compute { source, .. } if source.is_physics_domain() => 2,
            Error::ThresholdsFailed(_) => 2,
            _ => 1,
        }
    }
}
