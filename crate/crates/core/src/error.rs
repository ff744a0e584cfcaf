use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree tuple: {0}")]
    InvalidTuple(String),
    #[error("singularity level {l} exceeds codimension {k}")]
    LevelOutOfRange { l: u64, k: u64 },
    #[error("index {name}={value} outside [{min}, {max}]")]
    IndexOutOfRange { name: &'static str, value: i64, min: i64, max: i64 },
    #[error("{0}")]
    Precondition(String),
    #[error("missing parameter '{0}'")]
    MissingParam(String),
    #[error("unknown parameter '{0}'")]
    UnknownParam(String),
    #[error("missing variable '{0}'")]
    MissingVar(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("empty grid: {0}")]
    EmptyGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
