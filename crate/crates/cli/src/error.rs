use std::path::PathBuf;

use tenbound::ErrorKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RESOURCE_CAP: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tenbound::Error),
    #[error("{path}: {message}")]
    Input {
        path: PathBuf,
        message: String,
        kind: ErrorKind,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => kind_code(e.kind()),
            CliError::Input { kind, .. } => kind_code(*kind),
            CliError::Write { .. } => EXIT_PRECONDITION,
            CliError::Usage(_) => EXIT_PARSE,
        }
    }
}

pub fn kind_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Parse => EXIT_PARSE,
        ErrorKind::Precondition => EXIT_PRECONDITION,
        ErrorKind::ResourceCap => EXIT_RESOURCE_CAP,
        ErrorKind::Convergence => EXIT_NOT_CONVERGED,
    }
}
