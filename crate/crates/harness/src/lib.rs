//! Batch experiments for `epimoead`: configuration, parallel execution of
//! (problem, variant, run) cells with resumable persistence, and
//! comparison reports against the baseline.

pub mod config;
pub mod persist;
pub mod plan;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, Preset};
pub use runner::{run_experiment, RunRecord};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("report error: {0}")]
    Report(String),
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl HarnessError {
    pub fn config(err: impl std::fmt::Display) -> Self {
        HarnessError::Config(err.to_string())
    }

    /// Process exit status: 1 for configuration problems, 2 for anything
    /// that went wrong while running or reporting.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Report(_) | HarnessError::Runtime(_) => 2,
        }
    }
}
