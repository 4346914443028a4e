use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("qubit index error: {0}")]
    Index(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("register layout error: {0}")]
    Layout(String),
    #[error("value outside domain: {0}")]
    Domain(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("incompatible checkpoint: format version {found}, expected {expected}")]
    Incompatible { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
