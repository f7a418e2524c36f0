use thiserror::Error;

pub type Result<T> = std::result::Result<T, SqaError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SqaError {
    /// An index (qubit site, Fock level, eigenstate) is out of range.
    #[error("{what} index {index} out of range (limit {limit})")]
    Index {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    /// A model or run configuration is inconsistent. `field` names the
    /// offending parameter.
    #[error("invalid configuration for `{field}`: {message}")]
    Config { field: String, message: String },

    /// Input data violates a documented precondition.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A numerical routine failed or produced a result outside its
    /// quality contract.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl SqaError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        SqaError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user-supplied configuration rather than
    /// numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            SqaError::Config { .. } | SqaError::Index { .. } | SqaError::Validation(_)
        )
    }
}
