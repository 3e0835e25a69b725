use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] hkc::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                hkc::Error::InvalidArgument(_)
                | hkc::Error::InvalidData(_)
                | hkc::Error::DimensionMismatch { .. }
                | hkc::Error::Parse { .. }
                | hkc::Error::Csv(_)
                | hkc::Error::Json(_)
                | hkc::Error::Io(_) => 2,
                hkc::Error::InvalidState(_) => 1,
            },
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
