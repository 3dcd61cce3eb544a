use std::path::PathBuf;

/// Everything that can stop a CLI run, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("{path}:{line}: {message}")]
    ConfigSyntax { path: String, line: usize, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: helicity_core::Error,
    },
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type SimResult<T> = std::result::Result<T, SimError>;

impl SimError {
    pub fn core(context: impl Into<String>, source: helicity_core::Error) -> Self {
        SimError::Core { context: context.into(), source }
    }

    /// 0 success, 1 property failure, 2 invalid input, 3 numerical abort.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Validation(_) => 1,
            SimError::ConfigSyntax { .. } | SimError::Config(_) | SimError::Io { .. } => 2,
            SimError::Core { source, .. } => match source {
                helicity_core::Error::InvalidArgument(_) | helicity_core::Error::DegenerateMomentum(_) => 2,
                helicity_core::Error::NumericalInstability(_) | helicity_core::Error::InternalConsistency(_) => 3,
            },
        }
    }
}
