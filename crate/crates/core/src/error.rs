use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed inputs: length mismatches, bad partitions, empty dictionaries.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("point {x} lies outside the open interval (-1, 1)")]
    Domain { x: f64 },

    /// The requested evaluation method cannot handle the input.
    #[error("method error: {0}")]
    Method(String),

    /// Evaluation point coincides with a discontinuity of the integrand.
    #[error("evaluation point {x} coincides with a discontinuity; split the integrand at this point")]
    Singularity { x: f64 },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("critical index: p = {p} has Boyd index 1/2, where neither inversion formula applies")]
    CriticalIndex { p: f64 },

    #[error("right-hand side is not in the range of T: |∫ g/w dμ| = {defect:e}")]
    NotInRange { defect: f64 },

    #[error("refused: {0}")]
    Refused(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
