use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value or argument violates its contract. `field`
    /// names the offending parameter.
    #[error("invalid input `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("spectrum is degenerate at zero: eigenvalue {eigenvalue:e} lies within {threshold:e} of 0")]
    Degenerate { eigenvalue: f64, threshold: f64 },

    #[error(
        "ill-conditioned U_--: smallest singular value {smallest_singular_value:e}, \
         condition number {condition:e} exceeds {limit:e}"
    )]
    IllConditioned {
        smallest_singular_value: f64,
        condition: f64,
        limit: f64,
    },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("unitarity defect {defect:e} exceeds tolerance {tolerance:e}")]
    Unitarity { defect: f64, tolerance: f64 },

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by the input rather than by a numerical guard.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput { .. } | Error::DimensionMismatch { .. } | Error::SizeBound(_)
        )
    }

    /// Short name of the numerical guard that fired, if any.
    pub fn guard(&self) -> Option<&'static str> {
        match self {
            Error::Degenerate { .. } => Some("spectral-gap"),
            Error::IllConditioned { .. } => Some("ill-conditioned U_--"),
            Error::Singular(_) => Some("singular-matrix"),
            Error::Unitarity { .. } => Some("unitarity"),
            Error::Linalg(_) => Some("lapack"),
            _ => None,
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
