use thiserror::Error;

#[derive(Debug, Error)]
pub enum DfrcError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("matrix is not {0}")]
    NotDefinite(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("initialization infeasible: {0}")]
    Infeasible(String),
    #[error("layout: {0}")]
    Layout(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DfrcError>;
