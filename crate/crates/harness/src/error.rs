use std::fmt;
use std::path::Path;

/// Failure classes with distinct exit codes.
#[derive(Debug)]
pub enum HarnessError {
    /// Schema or validation failure; exit 2.
    Schema { field: String, message: String },
    /// A numerical guard fired; exit 3.
    Numerical { guard: String, message: String },
    /// Filesystem failure; exit 1.
    Io(String),
}

impl HarnessError {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Schema { field: field.into(), message: message.into() }
    }

    pub fn numerical(guard: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Numerical { guard: guard.into(), message: message.into() }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        HarnessError::Io(format!("{}: {e}", path.display()))
    }

    /// Core error raised while validating the named config section.
    pub fn core_in(section: &str, e: diracsea_core::Error) -> Self {
        match e {
            diracsea_core::Error::InvalidInput { field, reason } => {
                HarnessError::schema(format!("{section}.{field}"), format!("invalid input `{field}`: {reason}"))
            }
            other => other.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Schema { .. } => 2,
            HarnessError::Numerical { .. } => 3,
            HarnessError::Io(_) => 1,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Schema { field, message } => write!(f, "config error at `{field}`: {message}"),
            HarnessError::Numerical { guard, message } => write!(f, "numerical guard `{guard}` failed: {message}"),
            HarnessError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<diracsea_core::Error> for HarnessError {
    fn from(e: diracsea_core::Error) -> Self {
        if e.is_input_error() {
            let field = match &e {
                diracsea_core::Error::InvalidInput { field, .. } => field.clone(),
                _ => "config".to_string(),
            };
            HarnessError::schema(field, e.to_string())
        } else {
            HarnessError::numerical(e.guard().unwrap_or("numerical"), e.to_string())
        }
    }
}
