use thiserror::Error;

/// Problems with the input: exit code 2.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid `{object}`: {witness}")]
    Validation { object: String, witness: String },
    #[error("unknown binding `{0}`")]
    UnknownBinding(String),
    #[error("unknown suite `{0}` (expected monad-laws, duality, monoidal, dictionary or all)")]
    UnknownSuite(String),
    #[error("{0}")]
    Usage(String),
}

impl InputError {
    pub fn schema(path: &str, message: impl Into<String>) -> Self {
        InputError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn validation(object: &str, witness: impl ToString) -> Self {
        InputError::Validation {
            object: object.to_string(),
            witness: witness.to_string(),
        }
    }
}
