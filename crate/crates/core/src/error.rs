use thiserror::Error;

/// Library-wide error type.
///
/// `InvalidInput` maps to CLI exit code 2, `Numerical` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("growth statistics are undefined for a constant curve (m = -1)")]
    ConstantCurve,

    #[error("numerical failure in {stage}: {message}")]
    Numerical { stage: String, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(stage: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Numerical {
            stage: stage.into(),
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
