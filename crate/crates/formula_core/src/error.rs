use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("proof line {line}: {msg}")]
    ProofSyntax { line: usize, msg: String },
    #[error("the grid side must be odd and positive, got {0}")]
    BadSide(i32),
    #[error("variable {0} has no substitution")]
    Unmapped(String),
    #[error("substitution for {var} has {len} literals, more than 3")]
    TooWide { var: String, len: usize },
    #[error("malformed instance: {0}")]
    Instance(String),
}
