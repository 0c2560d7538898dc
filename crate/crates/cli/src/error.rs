use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tpplab::Error),

    #[error("{0}: {1}")]
    Io(String, std::io::Error),

    #[error("invalid input: {0}")]
    Input(String),
}

impl CliError {
    /// 3 when a resource cap was exceeded, 2 for every other input problem.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(tpplab::Error::TooLarge { .. }) => 3,
            _ => 2,
        }
    }
}
