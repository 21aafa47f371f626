use thiserror::Error;

/// Errors raised by the simulator.
///
/// The variants split into two families that the command line maps onto
/// distinct exit codes: configuration problems (bad input, missing data) and
/// numerical problems (singularities, failed integrations or fits).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data or configuration is missing or malformed.
    #[error("configuration error: {0}")]
    Config(String),

    /// Configuration error tied to a location in a text file.
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    /// A laser frequency sits on top of a transition.
    #[error("singular detuning: {0}")]
    Singularity(String),

    /// The equations of motion could not be integrated reliably.
    #[error("integration error: {0}")]
    Integration(String),

    /// A fit has no identifiable optimum.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// The force conversion could not bracket a root.
    #[error("conversion error: {0}")]
    Conversion(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the configuration family of errors.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Parse { .. } | Error::Domain(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
