use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("resource limit: {what} exceeded the bound of {bound}")]
    Fuel { what: &'static str, bound: usize },
    #[error("infinite enumeration: {0}")]
    Infinite(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("carrier mismatch: {0}")]
    Carrier(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("proof rejected: {0}")]
    Proof(String),
}

pub type Result<T> = std::result::Result<T, Error>;
