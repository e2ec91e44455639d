//! File formats, builtin problems and commands behind the `kcosym` binary.

pub mod builtins;
pub mod commands;
pub mod output;
pub mod problem;
pub mod report;

pub use commands::{cmd_check, cmd_example, cmd_solve, run_check, run_solve, Solved};
pub use problem::{load, load_str, Overrides, Problem, ToleranceFile};
pub use report::{CheckEntry, RunReport};

/// Errors surfaced by the commands, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The problem could not be read or validated.
    #[error("{0}")]
    Input(String),
    /// The problem was valid but the computation could not finish.
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<kcosym_core::Error> for CliError {
    fn from(e: kcosym_core::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}
