use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sequence text {0:?}")]
    InvalidSequence(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duplicate sequence {0} in data set")]
    DuplicateSequence(String),
    #[error("rank out of range")]
    RankOutOfRange,
    #[error("binomial requires k <= n (k = {k}, n = {n})")]
    KExceedsN { n: String, k: String },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("no candidate codeword")]
    NoCandidate,
    #[error("ambiguous received set: {0}")]
    Ambiguous(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Decoding-side failures (as opposed to misuse of the API).
    pub fn is_decode_failure(&self) -> bool {
        matches!(
            self,
            Error::DecodeFailure(_) | Error::NoCandidate | Error::Ambiguous(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
