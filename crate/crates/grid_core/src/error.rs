use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("perimeter is empty")]
    EmptyPerimeter,
    #[error("edge {index} is not a unit lattice edge")]
    NotUnitEdge { index: usize },
    #[error("edge {index} does not start where edge {prev} ends")]
    Broken { index: usize, prev: usize },
    #[error("perimeter kind {kind:?} but signed area is {area}")]
    Orientation { kind: crate::PerimeterKind, area: i64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
