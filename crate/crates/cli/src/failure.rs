use std::fmt;
use std::io;

use tweetsent_core::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_TRAINING: i32 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// An artifact produced by an earlier subcommand is absent.
    Missing { artifact: String, step: &'static str },
    Core(Error),
    Io { path: String, source: io::Error },
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        Failure::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Missing { .. } => EXIT_USAGE,
            Failure::Core(Error::Config(_)) => EXIT_USAGE,
            Failure::Core(Error::Training { .. }) => EXIT_TRAINING,
            Failure::Core(_) | Failure::Io { .. } => EXIT_DATA,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Missing { artifact, step } => {
                write!(f, "missing {artifact}; run `tweetsent {step}` first")
            }
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Core(Error::Csv(e))
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;
