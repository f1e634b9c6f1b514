use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("too few usable points to fit a slope: {0} (need at least 3)")]
    TooFewPoints(usize),

    #[error(transparent)]
    Geometry(#[from] lie_transport::Error),

    #[error("malformed CSV row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
