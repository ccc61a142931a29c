use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot evaluate at t = 0: valuation {0} is negative")]
    NegativeValuation(i64),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("all coordinates are zero")]
    ZeroVector,

    #[error("matrix is not in {group}: {reason}")]
    MembershipViolation { group: String, reason: String },

    #[error("unknown root {root} for {group}")]
    UnknownRoot { group: String, root: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid cocharacter: {0}")]
    InvalidCocharacter(String),

    #[error("word is not normalized: it does not evaluate to the identity at (1, ..., 1)")]
    NotNormalized,

    #[error("word is not reduced at position {0}")]
    NotReduced(usize),

    #[error("gamma {first} and gamma {second} agree modulo the center")]
    DuplicateGamma { first: usize, second: usize },

    #[error("at least one matrix is required")]
    EmptyFamily,

    #[error("no base point found within {0} candidates")]
    Unreachable(u64),

    #[error("search exhausted after {attempts} attempts")]
    Exhausted { attempts: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("{0}")]
    Precondition(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("malformed data: {0}")]
    Format(String),
}
