//! CLI error type and the exit-code contract: 0 success, 1 invalid input,
//! 2 degenerate spectrum, 3 oracle disagreement.

use std::fmt;

use subrad_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, arguments, or filesystem trouble.
    Input(String),
    /// An error bubbled up from the physics library.
    Core(CoreError),
    /// The modal and integrator routes disagree beyond tolerance.
    Deviation(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn input(msg: String) -> Self {
        CliError::Input(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(CoreError::DegenerateSpectrum(_)) => 2,
            CliError::Core(CoreError::OracleDisagreement(_)) => 3,
            CliError::Core(_) => 1,
            CliError::Deviation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Deviation(msg) => write!(f, "oracle disagreement: {msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("io error: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::input("bad".into()).exit_code(), 1);
        assert_eq!(
            CliError::Core(CoreError::InvalidParams("bad".into())).exit_code(),
            1
        );
        assert_eq!(
            CliError::Core(CoreError::DegenerateSpectrum("collision".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(CoreError::OracleDisagreement("off".into())).exit_code(),
            3
        );
        assert_eq!(CliError::Deviation("off".into()).exit_code(), 3);
    }
}
