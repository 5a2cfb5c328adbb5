use formula_core::FormulaError;
use matching_engine::MatchingError;
use restriction_space::RestrictionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SwitchingError {
    #[error("{what} is {value}, above the limit {limit}")]
    Capacity { what: &'static str, value: f64, limit: f64 },
    #[error("no branch of the tree is consistent with the restriction")]
    EmptyPrune,
    #[error("variable {0} is not a grid edge")]
    Variable(String),
    #[error("restriction has a hole at super-square {0:?}")]
    Hole((usize, usize)),
    #[error("encode: {0}")]
    Encode(String),
    #[error("decode: {0}")]
    Decode(String),
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}
