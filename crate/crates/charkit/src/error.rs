use thiserror::Error;

/// Errors reported by group construction, character computations and the
/// verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group order exceeds cap of {cap} (at least {reached} elements generated)")]
    OrderCapExceeded { reached: usize, cap: usize },

    #[error("class functions belong to different groups")]
    MismatchedGroups,

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("not a character: {0}")]
    NotACharacter(String),

    #[error("derived series of {0} stabilizes above the denominator (section not solvable)")]
    NotSolvable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("counterexample: {0}")]
    Counterexample(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
