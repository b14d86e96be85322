use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<pht_core::complex::ComplexError> for CliError {
    fn from(e: pht_core::complex::ComplexError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<pht_core::pht::PhtError> for CliError {
    fn from(e: pht_core::pht::PhtError) -> Self {
        use pht_core::pht::PhtError;
        match e {
            PhtError::Io(_) | PhtError::GridMismatch => CliError::Input(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<pht_core::sample::SampleError> for CliError {
    fn from(e: pht_core::sample::SampleError) -> Self {
        use pht_core::sample::SampleError;
        match e {
            SampleError::Pht(inner) => inner.into(),
            SampleError::Complex(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
