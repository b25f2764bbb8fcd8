use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero exponent vector is not a word")]
    EmptyWord,
    #[error("duplicate word {0} in word set")]
    DuplicateWord(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: need truncation order {needed}, have {available}")]
    Precision { needed: u32, available: u32 },
    #[error("jet order overflow: derivative of order {order} exceeds jet order {max}")]
    JetOrderOverflow { order: u32, max: u32 },
    #[error("enumeration too large: more than {cap} sets")]
    EnumerationTooLarge { cap: usize },
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("underdetermined system: rank {rank} for {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("the input family is linearly dependent")]
    Dependent,
    #[error("singular matrix")]
    Singular,
    #[error("zero input")]
    ZeroInput,
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("property refuted: {0}")]
    Refuted(String),
}

impl Error {
    /// Resource-limit errors, as opposed to bad input or refuted properties.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::EnumerationTooLarge { .. } | Error::BudgetExhausted(_)
        )
    }
}
