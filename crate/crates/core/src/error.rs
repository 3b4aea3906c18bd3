use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("malformed word {text:?}: {reason}")]
    MalformedWord { text: String, reason: String },
    #[error("generator index {index} out of range 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("malformed monomial {text:?}: {reason}")]
    MalformedMonomial { text: String, reason: String },
    #[error("invalid field descriptor {0:?} (expected `q` or `fp:<odd prime>`)")]
    InvalidField(String),
    #[error("symplectic involution requires even n, got n = {0}")]
    SymplecticOddSize(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operation requires characteristic 0")]
    RequiresCharacteristicZero,
    #[error("evaluation budget exceeded: {needed} evaluations > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
