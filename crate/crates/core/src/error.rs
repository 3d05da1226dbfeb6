use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator x{index} is outside the alphabet of rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("malformed word token `{0}`")]
    MalformedToken(String),

    #[error("word `{0}` is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("relators must be nonempty words")]
    EmptyRelator,

    #[error("small cancellation parameter must satisfy 0 < lambda < 1, got {0}")]
    InvalidLambda(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: gave up after {attempts} attempts")]
    BudgetExhausted { what: &'static str, attempts: usize },

    #[error("tietze transformation rejected: {0}")]
    Tietze(String),

    #[error("duplicate share index {0}")]
    DuplicateIndex(u64),

    #[error("column width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("insufficient shares: need {needed}, got {got}")]
    InsufficientShares { needed: usize, got: usize },

    #[error("decoded share value {value} is not below the modulus {modulus}")]
    ShareOutOfRange { value: u64, modulus: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("incomplete transcript: {0}")]
    IncompleteTranscript(String),

    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True when a rejection-sampling or construction budget ran out, as
    /// opposed to a malformed input.
    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}
