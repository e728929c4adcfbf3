use std::path::PathBuf;

use thiserror::Error;

/// Exit codes fixed for scripting.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("model degeneracy: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Core(#[from] ttstar_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use ttstar_core::Error as E;
        match self {
            Self::Degenerate(_) => EXIT_DEGENERATE,
            Self::Core(E::DegenerateCritical(_) | E::NoCriticalPoints | E::SingularEta) => EXIT_DEGENERATE,
            Self::Core(E::NoConvergence | E::NonDecaying) => EXIT_TOLERANCE,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
