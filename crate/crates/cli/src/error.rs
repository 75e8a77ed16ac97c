use std::fmt;
use std::process::ExitCode;

use chaos_aes::error::{AnalysisError, ImageError, KeyDistError, PipelineError};
use chaos_aes::ContainerError;

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Format(String),
    Crypto(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Format(_) => 4,
            CliError::Crypto(_) => 5,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Io(m) => ("i/o", m),
            CliError::Format(m) => ("format", m),
            CliError::Crypto(m) => ("crypto", m),
        };
        write!(f, "{kind} error: {msg}")
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn io(path: &std::path::Path, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl From<ImageError> for CliError {
    fn from(e: ImageError) -> Self {
        match e {
            ImageError::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ContainerError> for CliError {
    fn from(e: ContainerError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Params(p) => CliError::Usage(p.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Pipeline(p) => p.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<KeyDistError> for CliError {
    fn from(e: KeyDistError) -> Self {
        use KeyDistError::*;
        match e {
            StegoMagic | StegoLength(_) | QrDecode(_) | QrEncode(_) | Payload(_)
            | CiphertextEncoding | ElGamalParams(_) => CliError::Format(e.to_string()),
            Capacity { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Crypto(e.to_string()),
        }
    }
}
