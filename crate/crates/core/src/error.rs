use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("rank {rank} out of range for degree {degree}")]
    RankOutOfRange { rank: usize, degree: usize },
    #[error("degree {0} out of supported range")]
    DegreeOutOfRange(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("operation requires a nonempty domain")]
    EmptyDomain,
    #[error("operation requires a nonempty subset of alternatives")]
    EmptySubset,
    #[error("operation requires a unitary domain")]
    NotUnitary,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("frontier file checksum mismatch")]
    ChecksumMismatch,
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("verification mismatch: {missing} missing, {extra} extra canonical forms")]
    VerifyMismatch { missing: usize, extra: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
