use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps variants to exit codes: input-shaped problems (bad files,
/// bad parameters, bad JSON) exit with 2, numerical failures exit with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid distortion: {0}")]
    InvalidDistortion(String),

    #[error("premium is unbounded: {0}")]
    Unbounded(String),

    #[error("numeric overflow: {0}; rescale the losses and try again")]
    Overflow(String),

    #[error("no finite bound available: {0}")]
    NoFiniteBound(String),

    #[error("boundedness undetermined: {0}")]
    Indeterminate(String),

    #[error("solver did not converge within {iterations} iterations (best objective {best_objective:e})")]
    Convergence {
        iterations: usize,
        best_objective: f64,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Config(_)
            | Error::Parse { .. }
            | Error::Io(_)
            | Error::InvalidDistortion(_) => 2,
            Error::Unbounded(_)
            | Error::Overflow(_)
            | Error::NoFiniteBound(_)
            | Error::Indeterminate(_)
            | Error::Convergence { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
