use std::fmt;
use std::process::ExitCode;

use blowup_core::Error;

/// Command failure, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable input: exit 2.
    Usage(String),
    /// A budget would be exceeded: exit 3.
    Resource(String),
    /// An invariant check failed: exit 4.
    Falsified(String),
}

impl Failure {
    pub fn flag(flag: &str, detail: impl fmt::Display) -> Self {
        Failure::Usage(format!("{flag}: {detail}"))
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Falsified(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Resource(m) => write!(f, "{m}"),
            Failure::Falsified(m) => write!(f, "falsified: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Attaches the offending flag to library errors other than resource limits.
pub trait FlagContext<T> {
    fn flag(self, flag: &str) -> Result<T, Failure>;
}

impl<T> FlagContext<T> for Result<T, Error> {
    fn flag(self, flag: &str) -> Result<T, Failure> {
        self.map_err(|e| match e {
            Error::Resource { .. } => Failure::from(e),
            other => Failure::flag(flag, other),
        })
    }
}

pub type CmdResult<T> = Result<T, Failure>;
