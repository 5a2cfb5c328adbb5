use formula_core::FormulaError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RestrictionError {
    #[error("bad parameters: {0}")]
    Params(String),
    #[error("layout: {0}")]
    Layout(String),
    #[error("{stage} sampling gave up after {restarts} restarts (last: {reason})")]
    RestartCap { stage: &'static str, restarts: usize, reason: String },
    #[error("group of weight {weight} out of {size} is lopsided")]
    Lopsided { weight: usize, size: usize },
    #[error("almost bijection: {0}")]
    Bijection(String),
    #[error("matching assembly: {0}")]
    Assembly(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
