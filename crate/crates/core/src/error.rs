use alloc::boxed::Box;
use alloc::string::String;

use num_bigint::BigUint;
use thiserror::Error;

use crate::fop::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("symbol `{0}` is reserved")]
    ReservedSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("element {element} lies outside the universe [{size}]")]
    OutOfUniverse { element: u64, size: u32 },
    #[error("universe size must be at least 2, got {0}")]
    SizeTooSmall(u32),
    #[error("universe of size {size} with arity {arity} is too large")]
    TooLarge { size: u64, arity: usize },
    #[error("structure is over `{found}` but `{expected}` was expected")]
    VocabularyMismatch { expected: String, found: String },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: BigUint, budget: u64 },
    #[error("formula is not universal: {0}")]
    NotUniversal(String),
    #[error("formula is not first-order")]
    NotFirstOrder,
    #[error("second-order quantifiers must form a prefix over a first-order matrix")]
    NotSecondOrderPrefix,
    #[error("constant `{constant}` is defined by {count} tuples, expected exactly one")]
    ConstantNotUnique { constant: String, count: u64 },
    #[error("not a projective formula for `{symbol}`: {reason}")]
    NotProjective { symbol: String, reason: String },
    #[error("fop failed validation")]
    InvalidFop(Box<ValidationReport>),
    #[error("pullback target is not a literal of the target vocabulary: {0}")]
    NotLiteral(String),
    #[error("no fresh vertex left: {needed} needed, {available} available")]
    NoFreshVertex { needed: usize, available: usize },
    #[error("witness builder for {problem} produced a structure rejected by {gate}: {conjunction}")]
    ContradictoryWitnessBuilder {
        problem: String,
        gate: &'static str,
        conjunction: String,
    },
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}
