use std::fmt;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage named in scenario errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Shock,
    Fiscal,
    Transfers,
    Metrics,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Shock => "shock",
            Stage::Fiscal => "fiscal",
            Stage::Transfers => "transfers",
            Stage::Metrics => "metrics",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A malformed value in an input file.
    #[error("{}: row {row}, column `{column}`: {message}", file.display())]
    Data {
        file: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("{}: missing column `{column}`", file.display())]
    MissingColumn { file: PathBuf, column: String },

    #[error("invalid population: {0}")]
    Validation(String),

    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),

    #[error(
        "calibration did not converge after {iterations} iterations: \
         best child poverty rate {best_rate:.4}, target {target:.4}"
    )]
    Calibration {
        iterations: usize,
        best_rate: f64,
        target: f64,
    },

    #[error("cell universes differ: {0}")]
    CellUniverse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at_stage(self, stage: Stage) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
