use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid denominator: 0")]
    InvalidDenominator,
    #[error("invalid modulus: {0}")]
    InvalidModulus(i64),
    /// Input parameters violate a stated constraint; the payload names it.
    #[error("{0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// An identity that must hold by construction failed.
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("empty input: {0}")]
    Empty(String),
}
