use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Engine(#[from] povsim::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report {}: {message}", path.display())]
    Report { path: PathBuf, message: String },

    /// Simulated changes lie outside the configured tolerance.
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input or a failed validation, 2 for anything that went
    /// wrong while running.
    pub fn exit_code(&self) -> i32 {
        use povsim::Error as E;
        match self {
            CliError::Config(_) | CliError::ValidationFailed(_) | CliError::Report { .. } => 1,
            CliError::Engine(e) => match e {
                E::Data { .. }
                | E::MissingColumn { .. }
                | E::Validation(_)
                | E::InfeasibleConfig(_)
                | E::InvalidInput(_)
                | E::CellUniverse(_) => 1,
                _ => 2,
            },
            CliError::Io { .. } => 2,
        }
    }
}
