use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("odd power s^{0} has no value at integer q")]
    OddPower(i32),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("value is not an integer: {0}")]
    NonIntegral(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("type {0} lies outside the normal region")]
    RegionViolation(String),
    #[error("invalid relation spec: {0}")]
    InvalidSpec(String),
    #[error("series operator needs a truncation window")]
    TruncationRequired,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not in span: {0}")]
    NotInSpan(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no lattice of type {0}")]
    NoSuchType(String),
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
