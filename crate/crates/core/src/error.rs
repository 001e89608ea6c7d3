use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point coordinate lies outside the space of the system it is fed to.
    #[error("coordinate {value} outside the {space} domain")]
    Domain { value: f64, space: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// First-return time exceeded the cap; carries the offending seed.
    #[error("return time of x = {x} exceeds max_tau = {max_tau}")]
    ReturnTimeTruncated { x: f64, max_tau: u64 },

    #[error("undersampled: {0}")]
    Undersampled(String),

    #[error("precision budget exceeded: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Numerical failures (as opposed to bad inputs or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Undersampled(_) | Error::Overflow(_) | Error::ReturnTimeTruncated { .. }
        )
    }
}
