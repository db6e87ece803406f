use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input vector")]
    EmptyInput,

    #[error("mass {value} at index {index} is negative")]
    NegativeMass { index: usize, value: f64 },

    #[error("mass at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("masses sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("evaluation point {t} outside [0, {n}]")]
    OutOfDomain { t: f64, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("empty list of PMFs")]
    EmptyList,

    #[error("coupling support is not a monotone staircase")]
    NotComonotone,

    #[error("order {alpha} is not supported by {context}")]
    UnsupportedOrder { alpha: String, context: &'static str },

    #[error("value {0} has no rational representation within the requested denominator bound")]
    NotRational(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
