use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i128,
        min: i128,
        max: i128,
    },

    #[error("size mismatch: {0}")]
    Mismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("unsupported class: {0}")]
    UnsupportedClass(String),

    #[error("counting table has {available} entries, {needed} required")]
    InsufficientData { needed: usize, available: usize },

    #[error("Burnside sum {sum} is not divisible by group order {order}")]
    NonIntegralBurnside { sum: String, order: usize },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("oracle budget exceeded: {needed} points needed, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("not tame: {0}")]
    NotTame(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: impl Into<i128>, min: i128, max: i128) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
            min,
            max,
        }
    }
}
