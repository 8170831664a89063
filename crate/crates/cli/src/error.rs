use analogy::Error;
use thiserror::Error as ThisError;

/// Exit codes shared by every command.
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_NO_SOLUTION: u8 = 3;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("{path}: {source}")]
    Load { path: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Load { .. } | CliError::Io(_) => EXIT_DATA,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_)
                | Error::UnknownAttribute(_)
                | Error::SchemaTooLarge { .. }
                | Error::VacuousQuestion(_)
                | Error::InconsistentSpec(_)
                | Error::SpaceExceeded { .. }
                | Error::NonBoolean => EXIT_USAGE,
                _ => EXIT_DATA,
            },
        }
    }
}

/// Successful runs either answer the question or report that none exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NoAnswer,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::NoAnswer => EXIT_NO_SOLUTION,
        }
    }
}
