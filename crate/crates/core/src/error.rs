use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {offset}")]
    BadCharacter { ch: char, offset: usize },
    #[error("unbalanced brackets at offset {offset}")]
    UnbalancedBrackets { offset: usize },
    #[error("letter {letter:?} is outside a rank-{rank} alphabet")]
    LetterOutOfRank { letter: char, rank: usize },
    #[error("exponent must be a positive integer, got {0}")]
    BadExponent(String),
    #[error("empty word")]
    Empty,
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("rank must be between 1 and 26, got {0}")]
    BadRank(usize),
    #[error("chain term {0:?} reduces to the identity")]
    TrivialTerm(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word reduces to the identity")]
    TrivialWord,
    #[error("signs do not sum to zero")]
    UnbalancedSigns,
    #[error("expected {expected} conjugators, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SclError {
    #[error("chain is not homologically trivial")]
    NotHomologicallyTrivial,
    #[error("chain contains a word that reduces to the identity")]
    TrivialWord,
    #[error("oracle mode is limited to total length {limit}, chain has length {length}")]
    OracleTooLarge { length: usize, limit: usize },
    #[error("timed out after {0:?}")]
    Timeout(std::time::Duration),
    #[error("linear program has no optimum ({0})")]
    NoOptimum(&'static str),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl From<WordError> for SclError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::TrivialWord => SclError::TrivialWord,
            other => SclError::InternalInvariantViolation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("external factor {0:?} has no scl value")]
    MissingExternalScl(String),
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("scl must be non-negative, got {0}")]
    NegativeScl(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("signs do not sum to zero")]
    UnbalancedSigns,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Solver(#[from] SclError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("no records to summarize")]
    EmptyInput,
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
}
