use thiserror::Error;

/// Errors raised by the matroid, geometry and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {0} is not in the ground set")]
    NotInGround(usize),
    #[error("duplicate ground element {0:?}")]
    DuplicateElement(String),
    #[error("ground set has {ground} elements but the oracle covers {oracle}")]
    GroundMismatch { ground: usize, oracle: usize },
    #[error("{members:?} is not a line (rank-2 flat) of the matroid")]
    NotALine { members: Vec<usize> },
    #[error("matroid is not simple: {0:?} is dependent")]
    NotSimple(Vec<usize>),
    #[error("flats of rank {0} are not enumerated without the override")]
    RankTooLarge(usize),
    #[error("points have mixed dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("invalid line: {0}")]
    InvalidLine(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{0}")]
    Domain(String),
    #[error("construction check failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
