use std::fmt::Display;

/// Failure with its exit code: 1 mismatch, 2 usage or parse, 3 domain.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn mismatch(m: impl Display) -> CliError {
        CliError { code: 1, message: m.to_string() }
    }

    pub fn usage(m: impl Display) -> CliError {
        CliError { code: 2, message: m.to_string() }
    }

    pub fn domain(m: impl Display) -> CliError {
        CliError { code: 3, message: m.to_string() }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub trait OrDomain<T> {
    fn domain(self) -> Result<T, CliError>;
}

impl<T, E: Display> OrDomain<T> for Result<T, E> {
    fn domain(self) -> Result<T, CliError> {
        self.map_err(CliError::domain)
    }
}
