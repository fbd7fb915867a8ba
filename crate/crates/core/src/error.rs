use thiserror::Error;

/// Errors surfaced by set operations, choice computations, and checkers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: preference is defined only on equal-size sets, got |a| = {left} and |b| = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("enumeration budget exceeded: would need {required} subsets, budget is {budget}")]
    BudgetExceeded { required: u128, budget: usize },

    #[error("preference was not certified for the upper-bound and maximizer properties")]
    PreferenceNotCertified,

    #[error("invalid priority ranking: {0}")]
    InvalidPriority(String),

    #[error("invalid ground set: {0}")]
    InvalidGroundSet(String),

    #[error("invalid bounds: floor {floor} exceeds ceiling {ceiling} for type {type_index}")]
    InvalidBounds {
        type_index: usize,
        floor: usize,
        ceiling: usize,
    },
}
