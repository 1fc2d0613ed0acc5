use thiserror::Error;

use crate::model::PairSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid h-sequence: {0}")]
    InvalidHSequence(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid pair set: {0}")]
    InvalidPairSet(String),

    #[error("pair set {0} is not h-admissible")]
    NotAdmissible(PairSet),

    #[error("pair set {0} contains no descent")]
    NoDescent(PairSet),

    #[error("n = {n} exceeds the brute-force bound {max}")]
    BoundExceeded { n: usize, max: usize },

    #[error("n = {n} is below the validity floor {floor} of this formula")]
    BelowFloor { n: i64, floor: i64 },

    #[error("sequence has a negative entry at index {0}")]
    NegativeEntry(i64),

    /// Unreadable or malformed input files and settings.
    #[error("{0}")]
    Input(String),

    #[error("index shape mismatch: {0}")]
    IndexShape(String),

    #[error("element {v} is outside the ground set [1, {n}]")]
    OutOfRange { v: usize, n: usize },

    #[error("relations contain a cycle through {0}")]
    Cycle(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
