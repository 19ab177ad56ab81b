use std::path::PathBuf;

use trsll_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("{path}: row {row}: {reason}")]
    Row { path: PathBuf, row: usize, reason: String },

    #[error("missing upstream artifact: {what}\n  hint: {hint}")]
    MissingArtifact { what: String, hint: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// 2 config, 3 data, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::InvalidRange(_) => 2,
            CliError::Data(_) | CliError::Row { .. } | CliError::MissingArtifact { .. } | CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Domain(_) | CoreError::Invariant { .. } => 2,
                CoreError::OutOfBounds { .. }
                | CoreError::AxisNotMonotone { .. }
                | CoreError::DimensionMismatch(_)
                | CoreError::DuplicatePoint { .. } => 3,
                CoreError::Singular { .. }
                | CoreError::Numeric(_)
                | CoreError::DegenerateFit(_)
                | CoreError::InfeasibleFit(_) => 4,
            },
        }
    }
}
