use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("load factor must be in (0, 1], got {0}")]
    InvalidLoadFactor(f64),

    #[error("bucket size must be a positive power of two, got {0}")]
    InvalidBucketSize(u32),

    #[error("{kind} requires bucket size {expected}, got {got}")]
    BucketSizeMismatch { kind: &'static str, expected: u32, got: u32 },

    #[error("threshold {threshold} must be in [1, {bucket_size}]")]
    InvalidThreshold { threshold: u32, bucket_size: u32 },

    #[error("cannot size a table for zero keys")]
    NoKeys,

    #[error("{n} keys do not fit in capacity {capacity}")]
    OverCapacity { n: usize, capacity: usize },

    #[error("positive ratio must be in [0, 1], got {0}")]
    InvalidRatio(f64),

    #[error("requested {wanted} positive queries but only {available} keys exist")]
    NotEnoughKeys { wanted: usize, available: usize },

    #[error("{0}")]
    InvalidConfig(String),

    #[error("build budget exhausted after {failures} failures ({successes} successes)")]
    BudgetExhausted { successes: usize, failures: usize },

    #[error("{0} lookups returned the wrong answer")]
    LookupMismatch(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
