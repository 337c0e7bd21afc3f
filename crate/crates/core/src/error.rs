use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter index {index} out of range for alphabet of rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("ambient mismatch: Z^{}×F_{} vs Z^{}×F_{}", .left.0, .left.1, .right.0, .right.1)]
    AmbientMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("word is not a member of the subgroup")]
    NotMember,
    #[error("first subgroup is not contained in the second")]
    NotContained,
    #[error("lattice has infinite index")]
    InfiniteIndex,
    #[error("lattice is not a direct summand of the given quotient")]
    NotDirectSummand,
    #[error("fringe exceeded the cap of {cap} graphs")]
    FringeCapExceeded { cap: usize },
    #[error("Whitehead descent exceeded the cap of {cap} steps")]
    DescentCapExceeded { cap: usize },
    #[error("residue-lift enumeration needs {combos} combinations, cap is {cap}")]
    CombinationCapExceeded { combos: u128, cap: u128 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

impl Error {
    /// True for errors raised by a resource cap.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::FringeCapExceeded { .. }
                | Error::DescentCapExceeded { .. }
                | Error::CombinationCapExceeded { .. }
        )
    }
}
