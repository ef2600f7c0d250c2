use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid working-precision or run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Working precision too low for the requested number of moments.
    #[error("precision rule violated: {digits} digits cannot carry {moments} moments (need at least {required})")]
    PrecisionRule { digits: u32, moments: usize, required: u32 },

    /// Argument outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// Quadrature or series failed to reach the requested tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// LU factorisation hit a pivot below the singularity threshold.
    #[error("singular pivot at column {index} (|pivot| = {magnitude})")]
    SingularPivot { index: usize, magnitude: String },

    /// Padé denominator system is degenerate.
    #[error("degenerate Padé block [{numerator}/{denominator}]: {reason}")]
    DegeneratePade {
        numerator: usize,
        denominator: usize,
        reason: String,
    },

    /// Weniger delta denominator vanished.
    #[error("sequence transformation breakdown: {0}")]
    Breakdown(String),

    /// A result that should be real carried an imaginary residue.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for this error: 1 I/O or corrupt input file,
    /// 2 usage, 3 precision rule, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse(_) => 1,
            Error::Config(_) | Error::Domain(_) => 2,
            Error::PrecisionRule { .. } => 3,
            Error::Pole(_)
            | Error::Numerical(_)
            | Error::SingularPivot { .. }
            | Error::DegeneratePade { .. }
            | Error::Breakdown(_)
            | Error::Consistency(_) => 4,
        }
    }
}
