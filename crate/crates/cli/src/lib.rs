//! Front end for the `combstab` binary: instance documents, commands and
//! their reports.
//!
//! Exit codes are shared by every command: 0 for an affirmative verdict,
//! 1 for a negative one, 2 for unusable input.

pub mod commands;
pub mod document;
mod report;

pub use commands::{execute, Cli, Command};
pub use document::InstanceDocument;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] combstab::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn verdict(stdout: String, affirmative: bool) -> Self {
        Output {
            stdout,
            code: if affirmative { EXIT_OK } else { EXIT_NEGATIVE },
        }
    }
}
