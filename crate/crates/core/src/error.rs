use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact mode is capped at n = {cap}, got n = {n}")]
    ExactCapExceeded { n: usize, cap: usize },

    #[error("input size {got} exceeds the cap of {cap} for {what}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("degenerate subspace basis: rank {rank} < {expected}")]
    DegenerateBasis { rank: usize, expected: usize },

    #[error("arrangement parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no points given")]
    EmptyInput,

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("increment model `{0}` cannot be bridged")]
    NotBridgeable(&'static str),

    #[error("rank deficiency outside tolerance: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("complementary formulas disagree for {0}")]
    ComplementMismatch(String),

    #[error("gamma function pole near z = {0}")]
    GammaPole(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
