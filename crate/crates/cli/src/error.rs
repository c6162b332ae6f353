use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] rainbow_core::Error),

    #[error("{0} check(s) failed")]
    Verification(usize),

    #[error("cache integrity error: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_CACHE: i32 = 5;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_PARSE,
            CliError::Core(rainbow_core::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_PARSE,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Cache(_) => EXIT_CACHE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
