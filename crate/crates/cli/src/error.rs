use sqa_core::SqaError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Core configuration errors carry paths relative to the model section
/// unless they already name a top-level section.
fn qualify(field: &str) -> String {
    const SECTIONS: [&str; 5] = ["model", "disorder", "sweep", "output", "command"];
    if SECTIONS
        .iter()
        .any(|s| field == *s || field.starts_with(&format!("{s}.")))
    {
        field.to_string()
    } else {
        format!("model.{field}")
    }
}

impl From<SqaError> for CliError {
    fn from(e: SqaError) -> Self {
        match e {
            SqaError::Config { field, message } => CliError::Config {
                field: qualify(&field),
                message,
            },
            SqaError::Index { .. } | SqaError::Validation(_) => CliError::Config {
                field: "model".into(),
                message: e.to_string(),
            },
            SqaError::Numerical(m) => CliError::Numerical(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
