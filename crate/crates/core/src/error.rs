use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m[i,j] - conj(m[j,i])| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix of dimension {dim} is not bipartite with dims ({d_a}, {d_b})")]
    NotBipartite { dim: usize, d_a: usize, d_b: usize },

    #[error("wrong shape: {0}")]
    WrongShape(String),

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("{name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("measurement outcome has probability {probability:e}; conditional state undefined")]
    DegenerateOutcome { probability: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
