//! Grid geometry for domino problems on the chessboard-colored square grid.
//!
//! Cells are addressed by 1-based `(row, col)`; the cell `(1, 1)` is white and
//! colors alternate. Rows grow downward, so "clockwise" means clockwise as the
//! grid is printed.

mod coord;
mod error;
mod figure;
mod perimeter;
mod tiling;

pub use coord::{Color, Corner, Dir, GridCoord};
pub use error::GridError;
pub use figure::Figure;
pub use perimeter::{path_cost, verify_boundary_identity, DirectedEdge, OrientedPerimeter, PerimeterKind};
pub use tiling::{
    find_negative_certificate, maximum_matching, tile, Certificate, CertificateKind, Domino,
    DominoMatching,
};
