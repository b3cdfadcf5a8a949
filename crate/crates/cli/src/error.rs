use std::fmt;

/// Failure classes with distinct exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or input files (exit 1).
    Validation(String),
    /// The inputs were accepted but the numbers could not be produced (exit 2).
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Computation(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Computation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<seqbf::Error> for CliError {
    fn from(e: seqbf::Error) -> Self {
        use seqbf::Error::*;
        match e {
            DegeneratePosterior(_)
            | UnderdeterminedFit(_)
            | NonInvertibleFit
            | DegenerateDeviations
            | DegenerateSamples
            | ThresholdExceedsRange { .. } => CliError::Computation(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
