use grid_core::{Domino, GridCoord};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub type MiniId = usize;
pub type PairId = usize;
/// Super-square `(row, col)` on the reduced grid, 0-based.
pub type SuperId = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Mini-squares `a` and `b` in adjacent super-squares; `a` sits in the upper
/// or left one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MiniPair {
    pub a: MiniId,
    pub b: MiniId,
    pub orientation: Orientation,
}

/// Combinatorics of the path system, without geometry: which mini-squares
/// exist, which pairs are joined by a group of `2R` variable paths, and the
/// fixed matching `π₁` of super-squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Shape", into = "Shape")]
pub struct PathSystem {
    pub m: usize,
    pub delta: usize,
    pub r: usize,
    pairs: Vec<MiniPair>,
    index: HashMap<(MiniId, MiniId), PairId>,
    incident: Vec<Vec<PairId>>,
}

impl PathSystem {
    /// Pairs are listed super by super in row-major order: first all pairs
    /// towards the right neighbour, then all towards the one below.
    pub fn new(m: usize, delta: usize, r: usize) -> Self {
        let mut pairs = Vec::new();
        for pass in [Orientation::Horizontal, Orientation::Vertical] {
            for i in 0..m {
                for j in 0..m {
                    let other = match pass {
                        Orientation::Horizontal if j + 1 < m => (i, j + 1),
                        Orientation::Vertical if i + 1 < m => (i + 1, j),
                        _ => continue,
                    };
                    for a in 0..delta {
                        for b in 0..delta {
                            pairs.push(MiniPair {
                                a: (i * m + j) * delta + a,
                                b: (other.0 * m + other.1) * delta + b,
                                orientation: pass,
                            });
                        }
                    }
                }
            }
        }
        let mut sys = PathSystem { m, delta, r, pairs, index: HashMap::new(), incident: Vec::new() };
        sys.reindex();
        sys
    }

    fn reindex(&mut self) {
        self.index = self.pairs.iter().enumerate().map(|(p, mp)| ((mp.a, mp.b), p)).collect();
        self.incident = vec![Vec::new(); self.num_minis()];
        for (p, mp) in self.pairs.iter().enumerate() {
            self.incident[mp.a].push(p);
            self.incident[mp.b].push(p);
        }
    }

    pub fn num_minis(&self) -> usize {
        self.m * self.m * self.delta
    }

    pub fn num_supers(&self) -> usize {
        self.m * self.m
    }

    pub fn group_size(&self) -> usize {
        2 * self.r
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn num_var_paths(&self) -> usize {
        self.pairs.len() * 2 * self.r
    }

    pub fn pairs(&self) -> &[MiniPair] {
        &self.pairs
    }

    pub fn pair(&self, p: PairId) -> MiniPair {
        self.pairs[p]
    }

    /// The pair joining two mini-squares, in either order.
    pub fn pair_between(&self, x: MiniId, y: MiniId) -> Option<PairId> {
        self.index.get(&(x, y)).or_else(|| self.index.get(&(y, x))).copied()
    }

    pub fn incident(&self, mini: MiniId) -> &[PairId] {
        &self.incident[mini]
    }

    pub fn mini(&self, s: SuperId, d: usize) -> MiniId {
        (s.0 * self.m + s.1) * self.delta + d
    }

    pub fn super_of(&self, mini: MiniId) -> SuperId {
        let s = mini / self.delta;
        (s / self.m, s % self.m)
    }

    pub fn diag_index(&self, mini: MiniId) -> usize {
        mini % self.delta
    }

    pub fn super_index(&self, s: SuperId) -> usize {
        s.0 * self.m + s.1
    }

    pub fn minis_of(&self, s: SuperId) -> std::ops::Range<MiniId> {
        let first = self.mini(s, 0);
        first..first + self.delta
    }

    /// Mini-squares of white super-squares have their variable attachments
    /// on white cells.
    pub fn is_white(&self, mini: MiniId) -> bool {
        let (i, j) = self.super_of(mini);
        (i + j) % 2 == 0
    }

    pub fn survivor(&self) -> MiniId {
        0
    }

    pub fn supers_adjacent(&self, s: SuperId, t: SuperId) -> bool {
        s.0.abs_diff(t.0) + s.1.abs_diff(t.1) == 1
    }

    pub fn super_neighbors(&self, s: SuperId) -> Vec<SuperId> {
        let mut out = Vec::with_capacity(4);
        if s.0 > 0 {
            out.push((s.0 - 1, s.1));
        }
        if s.1 + 1 < self.m {
            out.push((s.0, s.1 + 1));
        }
        if s.0 + 1 < self.m {
            out.push((s.0 + 1, s.1));
        }
        if s.1 > 0 {
            out.push((s.0, s.1 - 1));
        }
        out
    }

    /// Global id of variable path `idx` of a pair.
    pub fn var_path(&self, p: PairId, idx: usize) -> usize {
        p * 2 * self.r + idx
    }

    pub fn var_path_pair(&self, path: usize) -> (PairId, usize) {
        (path / (2 * self.r), path % (2 * self.r))
    }

    /// `π₁`: column 0 below the top-left super-square is paired vertically,
    /// the rest of every row horizontally. The top-left super-square, which
    /// holds the survivor, stays single.
    pub fn pi1(&self) -> Vec<(SuperId, SuperId)> {
        let m = self.m;
        let mut out = Vec::new();
        for i in (1..m).step_by(2) {
            out.push(((i, 0), (i + 1, 0)));
        }
        for i in 0..m {
            for j in (1..m).step_by(2) {
                out.push(((i, j), (i, j + 1)));
            }
        }
        out
    }

    /// Reduced-grid cell of a super-square (1-based).
    pub fn reduced_cell(&self, s: SuperId) -> GridCoord {
        GridCoord::new(s.0 as i32 + 1, s.1 as i32 + 1)
    }

    pub fn reduced_edge(&self, s: SuperId, t: SuperId) -> Domino {
        Domino::new(self.reduced_cell(s), self.reduced_cell(t))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Shape {
    m: usize,
    delta: usize,
    r: usize,
}

impl From<Shape> for PathSystem {
    fn from(s: Shape) -> Self {
        PathSystem::new(s.m, s.delta, s.r)
    }
}

impl From<PathSystem> for Shape {
    fn from(s: PathSystem) -> Self {
        Shape { m: s.m, delta: s.delta, r: s.r }
    }
}
