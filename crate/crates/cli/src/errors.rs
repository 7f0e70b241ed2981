//! Exit-code-aware error handling.
//!
//! Usage/config problems (bad flags, malformed or missing input files,
//! invalid spec fields) exit with code 2; failures while executing an
//! otherwise valid request (I/O on outputs, divergence) exit with 1.

use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

pub type CliResult<T = ()> = Result<T, CliError>;

impl CliError {
    pub fn report(self) -> ExitCode {
        match self {
            CliError::Usage(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(2)
            }
            CliError::Runtime(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(anyhow::anyhow!(msg.into()))
    }
}

/// Classify a fallible step as a usage or runtime failure.
pub trait Classify<T> {
    fn or_usage(self, context: &str) -> CliResult<T>;
    fn or_runtime(self, context: &str) -> CliResult<T>;
}

impl<T, E> Classify<T> for Result<T, E>
where
    E: Into<anyhow::Error>,
{
    fn or_usage(self, context: &str) -> CliResult<T> {
        self.map_err(|e| CliError::Usage(e.into().context(context.to_owned())))
    }

    fn or_runtime(self, context: &str) -> CliResult<T> {
        self.map_err(|e| CliError::Runtime(e.into().context(context.to_owned())))
    }
}
