use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("cells do not partition the domain of size {degree}")]
    NotAPartition { degree: usize },
    #[error("point {point} is not in cell {cell}")]
    PointNotInCell { point: usize, cell: usize },
    #[error("cell {cell} has fewer than two points")]
    CellTooSmall { cell: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("base pair points must be distinct (got {0} twice)")]
    LoopPair(usize),
    #[error("group order exceeds enumeration cap of {cap}")]
    TooLarge { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("problem has no properties")]
    Empty,
    #[error("property degree {found} does not match problem degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
}
