use std::fmt;

use potb_core::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const CLAIM_FAILURE: u8 = 1;
    pub const CONSTRAINT: u8 = 2;
    pub const IO_OR_PARSE: u8 = 3;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl fmt::Display) -> Self {
        Self { code, message: message.to_string() }
    }

    pub fn parse(message: impl fmt::Display) -> Self {
        Self::new(exit::IO_OR_PARSE, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::new(exit::IO_OR_PARSE, format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Errors from recipe or parameter choices are constraint violations;
/// anything about malformed input is a parse error.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConstraintViolation { .. }
            | Error::UnknownRecipe(_)
            | Error::NotPrimePower(_)
            | Error::EvenCharacteristic(_)
            | Error::FieldTooLarge(_)
            | Error::UnsupportedOrder(_)
            | Error::SizeCapExceeded { .. } => exit::CONSTRAINT,
            _ => exit::IO_OR_PARSE,
        };
        Self::new(code, e)
    }
}
