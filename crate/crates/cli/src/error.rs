use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process-level failure with a stable exit code and category tag.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] twisted_atoms::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("channel forbidden: {0}")]
    ChannelForbidden(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use twisted_atoms::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Physics(e) => match e {
                E::Domain(_) | E::Configuration(_) => 2,
                E::Kinematics(_) => 3,
                E::NonConvergence(_) | E::AmbiguousWinding(_) => 4,
                E::SelectionAmbiguity(_) | E::Unresolvable(_) => 5,
            },
            CliError::Io { .. } => 6,
            CliError::ChannelForbidden(_) => 7,
        }
    }

    pub fn category(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "kinematics",
            4 => "numerical",
            5 => "selection",
            6 => "io",
            _ => "channel_forbidden",
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
