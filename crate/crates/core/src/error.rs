use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u32),
    #[error("modulus mismatch: Z_{left} vs Z_{right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("{value} is not a unit in Z_{modulus}")]
    NotInvertible { value: u32, modulus: u32 },
    #[error("invalid dichotomy: {0}")]
    InvalidDichotomy(String),
    #[error("dichotomy is not strong ({0} quasipolarities)")]
    NotStrong(usize),
    #[error("interval {interval} is not consonant")]
    NotConsonant { interval: u32 },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("modulus {n} exceeds the brute-force limit {limit}")]
    ModulusTooLarge { n: u32, limit: u32 },
    #[error("no candidate symmetries: {0}")]
    EmptyCandidates(String),
    #[error("tower level {level} failed: {reason}")]
    Tower { level: usize, reason: String },
    #[error("invalid interval on the circle: {0}")]
    InvalidPoint(String),
    #[error("{0}")]
    Parse(String),
}
