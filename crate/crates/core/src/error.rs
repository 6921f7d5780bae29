use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("relations violated: {0}")]
    Relations(String),
}

pub type Result<T> = std::result::Result<T, Error>;
