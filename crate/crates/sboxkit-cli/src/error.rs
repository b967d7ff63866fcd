use std::fmt;
use std::process::ExitCode;

/// Command-line errors carrying the process exit code:
/// 1 usage, 2 parse, 3 precondition, 4 verification failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Precondition(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Parse(_) => ExitCode::from(2),
            CliError::Precondition(_) => ExitCode::from(3),
            CliError::Verification(_) => ExitCode::from(4),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Precondition(msg) => write!(f, "precondition error: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Precondition(format!("io: {e}"))
    }
}

impl From<sboxkit::Error> for CliError {
    fn from(e: sboxkit::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
