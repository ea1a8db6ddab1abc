//! File formats, seeded experiments and reports for the `matfree` library.

pub mod experiment;
pub mod format;
pub mod report;

use thiserror::Error;

pub use experiment::{run_experiment, ExperimentConfig, ExperimentKind};
pub use format::FormatError;
pub use report::{emit_plot_data, Report};

/// Process exit codes used by the command-line front end.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const PROPERTY_VIOLATED: i32 = 2;
    pub const BUDGET_EXCEEDED: i32 = 3;
    pub const MALFORMED_INPUT: i32 = 4;
}

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] matfree::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(matfree::Error::BudgetExceeded { .. } | matfree::Error::ResourceLimit { .. }) => {
                exit::BUDGET_EXCEEDED
            }
            LabError::Io { .. } => exit::IO,
            _ => exit::MALFORMED_INPUT,
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), LabError> {
    std::fs::write(path, contents).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}
