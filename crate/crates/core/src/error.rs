use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown level {0}")]
    UnknownLevel(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("linear system has rank {rank} < {needed}")]
    Underdetermined { rank: usize, needed: usize },
    #[error("cyclotomic element is not rational (component {index} nonzero)")]
    NotRational { index: usize },
    #[error("series reindex would drop the term at exponent {num}/{den}")]
    LossyReindex { num: i64, den: u32 },
    #[error("incompatible cyclotomic orders {0} and {1}")]
    IncompatibleRings(u32, u32),
    #[error("non-integral coefficient at q^{exponent}: {detail}")]
    NonIntegral { exponent: i64, detail: String },
    #[error("curve record order {have} is below the required {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("pole of order 1 at the cusp")]
    PoleOrderOne,
    #[error("nonvanishing remainder at q^{0}")]
    Remainder(i64),
    #[error("pipeline integrity failure: {0}")]
    Pipeline(String),
    #[error("no convergence after {terms} terms (error estimate {achieved:e})")]
    Convergence { terms: usize, achieved: f64 },
    #[error("ambiguous root selection: {0}")]
    Ambiguous(String),
    #[error("rounding failed: slack {slack} after {digits} digits")]
    Rounding { slack: f64, digits: u32 },
    #[error("checksum mismatch")]
    Checksum,
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
