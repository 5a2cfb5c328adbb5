use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    /// +1 for white, -1 for black.
    pub fn sign(self) -> i64 {
        match self {
            Color::White => 1,
            Color::Black => -1,
        }
    }
}

/// A grid cell. Ordering is row-major, which is the scan order used by every
/// deterministic procedure in the workspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct GridCoord {
    pub row: i32,
    pub col: i32,
}

impl From<(i32, i32)> for GridCoord {
    fn from((row, col): (i32, i32)) -> Self {
        GridCoord { row, col }
    }
}

impl From<GridCoord> for (i32, i32) {
    fn from(c: GridCoord) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Display for GridCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl GridCoord {
    pub const fn new(row: i32, col: i32) -> Self {
        GridCoord { row, col }
    }

    pub fn color(self) -> Color {
        if (self.row + self.col).rem_euclid(2) == 0 {
            Color::White
        } else {
            Color::Black
        }
    }

    pub fn is_white(self) -> bool {
        self.color() == Color::White
    }

    /// Neighbors in the order up, right, down, left.
    pub fn neighbors(self) -> [GridCoord; 4] {
        let GridCoord { row, col } = self;
        [
            GridCoord::new(row - 1, col),
            GridCoord::new(row, col + 1),
            GridCoord::new(row + 1, col),
            GridCoord::new(row, col - 1),
        ]
    }

    pub fn is_adjacent(self, other: GridCoord) -> bool {
        (self.row - other.row).abs() + (self.col - other.col).abs() == 1
    }

    pub fn in_grid(self, n: i32) -> bool {
        (1..=n).contains(&self.row) && (1..=n).contains(&self.col)
    }

    pub fn step(self, d: Dir) -> GridCoord {
        let (dr, dc) = d.delta();
        GridCoord::new(self.row + dr, self.col + dc)
    }
}

/// Lattice point. Cell `(r, c)` spans corners `r-1..=r` by `c-1..=c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub row: i32,
    pub col: i32,
}

impl Corner {
    pub const fn new(row: i32, col: i32) -> Self {
        Corner { row, col }
    }

    pub fn step(self, d: Dir) -> Corner {
        let (dr, dc) = d.delta();
        Corner::new(self.row + dr, self.col + dc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::North, Dir::East, Dir::South, Dir::West];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::North => (-1, 0),
            Dir::East => (0, 1),
            Dir::South => (1, 0),
            Dir::West => (0, -1),
        }
    }

    pub fn right(self) -> Dir {
        match self {
            Dir::North => Dir::East,
            Dir::East => Dir::South,
            Dir::South => Dir::West,
            Dir::West => Dir::North,
        }
    }

    pub fn left(self) -> Dir {
        self.right().right().right()
    }

    pub fn from_delta(dr: i32, dc: i32) -> Option<Dir> {
        match (dr, dc) {
            (-1, 0) => Some(Dir::North),
            (0, 1) => Some(Dir::East),
            (1, 0) => Some(Dir::South),
            (0, -1) => Some(Dir::West),
            _ => None,
        }
    }
}
