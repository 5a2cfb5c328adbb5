use crate::{Corner, Dir, Figure, GridCoord, GridError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: Corner,
    pub to: Corner,
}

impl DirectedEdge {
    pub fn new(from: Corner, dir: Dir) -> Self {
        DirectedEdge { from, to: from.step(dir) }
    }

    pub fn dir(&self) -> Option<Dir> {
        Dir::from_delta(self.to.row - self.from.row, self.to.col - self.from.col)
    }

    /// The cell lying to the right of the edge when walking along it.
    pub fn right_cell(&self) -> Option<GridCoord> {
        let Corner { row: r, col: c } = self.from;
        Some(match self.dir()? {
            Dir::East => GridCoord::new(r + 1, c + 1),
            Dir::South => GridCoord::new(r + 1, c),
            Dir::West => GridCoord::new(r, c),
            Dir::North => GridCoord::new(r, c + 1),
        })
    }

    pub fn left_cell(&self) -> Option<GridCoord> {
        let Corner { row: r, col: c } = self.from;
        Some(match self.dir()? {
            Dir::East => GridCoord::new(r, c + 1),
            Dir::South => GridCoord::new(r + 1, c + 1),
            Dir::West => GridCoord::new(r + 1, c),
            Dir::North => GridCoord::new(r, c),
        })
    }

    /// +1 when the cell to the right is white, -1 when black.
    pub fn cost(&self) -> Option<i64> {
        self.right_cell().map(|c| c.color().sign())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PerimeterKind {
    Outer,
    Hole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedPerimeter {
    pub edges: Vec<DirectedEdge>,
    pub kind: PerimeterKind,
}

impl OrientedPerimeter {
    /// Twice the signed area, positive for clockwise loops (rows grow downward).
    pub fn signed_area2(&self) -> i64 {
        self.edges
            .iter()
            .map(|e| {
                let (x0, y0) = (e.from.col as i64, e.from.row as i64);
                let (x1, y1) = (e.to.col as i64, e.to.row as i64);
                x0 * y1 - x1 * y0
            })
            .sum()
    }

    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        self.edges.iter().map(|e| e.from)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.edges.is_empty() {
            return Err(GridError::EmptyPerimeter);
        }
        let k = self.edges.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.dir().is_none() {
                return Err(GridError::NotUnitEdge { index: i });
            }
            let prev = (i + k - 1) % k;
            if self.edges[prev].to != e.from {
                return Err(GridError::Broken { index: i, prev });
            }
        }
        let area = self.signed_area2();
        let ok = match self.kind {
            PerimeterKind::Outer => area > 0,
            PerimeterKind::Hole => area < 0,
        };
        if ok {
            Ok(())
        } else {
            Err(GridError::Orientation { kind: self.kind, area })
        }
    }
}

pub fn path_cost(perimeter: &OrientedPerimeter) -> Result<i64, GridError> {
    perimeter.validate()?;
    Ok(perimeter.edges.iter().map(|e| e.cost().expect("validated unit edge")).sum())
}

/// The edges separating a cell of the figure from a cell outside it, each
/// directed so that the figure cell is on the right.
fn boundary_edges(fig: &Figure) -> BTreeSet<DirectedEdge> {
    let mut out = BTreeSet::new();
    for c in fig.iter() {
        let (r, col) = (c.row, c.col);
        if !fig.contains(GridCoord::new(r - 1, col)) {
            out.insert(DirectedEdge::new(Corner::new(r - 1, col - 1), Dir::East));
        }
        if !fig.contains(GridCoord::new(r, col + 1)) {
            out.insert(DirectedEdge::new(Corner::new(r - 1, col), Dir::South));
        }
        if !fig.contains(GridCoord::new(r + 1, col)) {
            out.insert(DirectedEdge::new(Corner::new(r, col), Dir::West));
        }
        if !fig.contains(GridCoord::new(r, col - 1)) {
            out.insert(DirectedEdge::new(Corner::new(r, col - 1), Dir::North));
        }
    }
    out
}

impl Figure {
    /// All perimeter loops. At a corner where two cells touch diagonally the
    /// trace turns right first, so such cells end up on separate loops.
    pub fn perimeters(&self) -> Vec<OrientedPerimeter> {
        let edges = boundary_edges(self);
        let mut outgoing: BTreeMap<Corner, Vec<DirectedEdge>> = BTreeMap::new();
        for e in &edges {
            outgoing.entry(e.from).or_default().push(*e);
        }
        let mut used = BTreeSet::new();
        let mut loops = Vec::new();
        for &start in &edges {
            if used.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                used.insert(cur);
                cycle.push(cur);
                let d = cur.dir().expect("unit edge");
                let candidates = &outgoing[&cur.to];
                let next = [d.right(), d, d.left()]
                    .into_iter()
                    .find_map(|nd| candidates.iter().find(|e| e.dir() == Some(nd) && !used.contains(e)))
                    .copied();
                match next {
                    Some(e) => cur = e,
                    None => break,
                }
            }
            let mut p = OrientedPerimeter { edges: cycle, kind: PerimeterKind::Outer };
            if p.signed_area2() < 0 {
                p.kind = PerimeterKind::Hole;
            }
            loops.push(p);
        }
        loops
    }

    /// Sum of [`path_cost`] over all loops.
    pub fn perimeter_cost(&self) -> i64 {
        self.perimeters().iter().map(|p| path_cost(p).expect("traced loops are well formed")).sum()
    }
}

/// Checks that the perimeter cost equals `4(w - b)`.
pub fn verify_boundary_identity(figure: &Figure) -> bool {
    let w = figure.white_count() as i64;
    let b = figure.black_count() as i64;
    let loops = figure.perimeters();
    loops.iter().all(|p| p.validate().is_ok()) && figure.perimeter_cost() == 4 * (w - b)
}
