use grid_core::GridCoord;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("{0} lies outside the grid")]
    OutsideGrid(GridCoord),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(GridCoord, GridCoord),
    #[error("{0} is already matched")]
    AlreadyMatched(GridCoord),
    #[error("point {point} is outside [1, {n}]")]
    PointOutOfRange { point: i64, n: i64 },
    #[error("cannot pad interval [{lo}, {hi}] to even length inside [1, {n}]")]
    Boundary { lo: i64, hi: i64, n: i64 },
    #[error("matching of size {size} exceeds the capacity {limit} for n = {n}")]
    Capacity { size: usize, limit: f64, n: i64 },
    #[error("witness does not certify the matching")]
    InvalidWitness,
    #[error("infeasible dent configuration: {0}")]
    Infeasible(String),
}
