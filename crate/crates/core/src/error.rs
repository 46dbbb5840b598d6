use thiserror::Error;

use crate::term::{Calculus, Sort};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("constant `{name}` is not allowed in {mode} mode (byte {pos})")]
    NotInMode {
        name: String,
        mode: Calculus,
        pos: usize,
    },

    #[error("sort mismatch in `{node}`: left side has {left} right ports, right side has {right} left ports")]
    SortMismatch {
        node: String,
        left: usize,
        right: usize,
    },

    #[error("term `{0}` is not valid in this semantics")]
    Unsupported(String),

    #[error("net format error on line {line}: {msg}")]
    NetFormat { line: usize, msg: String },

    #[error("transitions `{0}` and `{1}` share a footprint")]
    DuplicateFootprint(String, String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("unknown transition `{0}` in contention declaration")]
    UnknownTransition(String),

    #[error("C/E net has a non-set multiset: {0}")]
    NotASet(String),

    #[error("cannot combine a C/E net with a P/T net")]
    KindMismatch,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("systems have different sorts {0} and {1}")]
    SortDiffers(Sort, Sort),

    #[error("synchronisation search exceeded its budget of {0} nodes")]
    SearchBudget(u64),

    #[error("state space exceeded the cap of {0} states")]
    StateCap(usize),

    #[error("isomorphism check exceeded its size cap of {0}")]
    SizeCap(usize),

    #[error("not a synchronisation: boundary profiles differ")]
    NotASynch,

    #[error("malformed argument: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
