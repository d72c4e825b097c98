use thiserror::Error;

/// Unified error type for all numeric and configuration failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Shifts too close for a partial-fraction route; the offending gap is reported.
    #[error("degenerate shifts: {context} (gap {gap:.3e} below {min:.3e})")]
    DegenerateShift {
        context: &'static str,
        gap: f64,
        min: f64,
    },

    /// An argument landed within the exclusion radius of a pole.
    #[error("pole proximity: {context} (|arg - pole| = {distance:.3e})")]
    PoleProximity { context: String, distance: f64 },

    /// Outside the validity region of the requested evaluation.
    #[error("domain: {0}")]
    Domain(String),

    /// A table or sieve would exceed the configured memory budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Successive refinements failed to settle within the requested tolerance.
    #[error("refinement failure: {context} (last change {last_change:.3e}, tol {tol:.3e})")]
    Refinement {
        context: &'static str,
        last_change: f64,
        tol: f64,
    },

    /// A truncation cutoff was too small for the requested accuracy.
    #[error("truncation: {0}")]
    Truncation(String),

    /// An experiment parameter is malformed or outside its precondition window.
    #[error("config: parameter `{parameter}`: {message}")]
    Config { parameter: String, message: String },
}

impl Error {
    pub fn config(parameter: &str, message: impl Into<String>) -> Self {
        Error::Config {
            parameter: parameter.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 2 config, 3 refinement, 4 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Refinement { .. } => 3,
            Error::Resource(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
