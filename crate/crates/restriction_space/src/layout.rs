use crate::params::LayoutParams;
use crate::system::{MiniId, Orientation, PairId, PathSystem, SuperId};
use crate::RestrictionError;
use grid_core::{Dir, Domino, GridCoord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Brick `(row, col)` in brick units, 0-based.
pub type BrickId = (i32, i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    Variable(usize),
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickStep {
    pub brick: BrickId,
    pub entry: GridCoord,
    pub exit: GridCoord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedPath {
    pub pair: PairId,
    pub kind: PathKind,
    pub bundle: usize,
    pub steps: Vec<BrickStep>,
    /// Boundary cell of the source mini-square next to the first brick.
    pub src_attach: GridCoord,
    pub dst_attach: GridCoord,
}

impl RoutedPath {
    /// The edges the path owns when its type is 1: attachment to the first
    /// brick, brick to brick, and last brick to attachment.
    pub fn crossing_edges(&self) -> Vec<Domino> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut prev = self.src_attach;
        for s in &self.steps {
            out.push(Domino::new(prev, s.entry));
            prev = s.exit;
        }
        out.push(Domino::new(prev, self.dst_attach));
        out
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self.kind, PathKind::Fixed(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BrickUse {
    pub horizontal: u8,
    pub vertical: u8,
}

/// Where a grid cell lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Row 1 or column 1 outside the survivor.
    Strip,
    Mini(MiniId, i32, i32),
    Brick(BrickId, i32, i32),
}

/// The geometric layout: mini-squares on super-square diagonals and `3R`
/// routed paths per pair of mini-squares in adjacent super-squares.
#[derive(Debug, Clone, Serialize)]
pub struct Layout {
    pub params: LayoutParams,
    pub system: PathSystem,
    /// Indexed by [`Layout::path_index`].
    pub paths: Vec<RoutedPath>,
    pub brick_use: BTreeMap<BrickId, BrickUse>,
    #[serde(skip)]
    brick_paths: HashMap<BrickId, Vec<usize>>,
    #[serde(skip)]
    crossing: HashMap<Domino, usize>,
    #[serde(skip)]
    mini_paths: Vec<Vec<(usize, GridCoord)>>,
}

fn side_cell(facing: Dir, o: i32, b: i32) -> (i32, i32) {
    match facing {
        Dir::North => (0, o),
        Dir::South => (b - 1, o),
        Dir::West => (o, 0),
        Dir::East => (o, b - 1),
    }
}

fn opposite(d: Dir) -> Dir {
    d.right().right()
}

fn is_horizontal(d: Dir) -> bool {
    matches!(d, Dir::East | Dir::West)
}

/// Unit steps through axis-aligned waypoints.
fn expand(waypoints: &[BrickId]) -> Vec<BrickId> {
    let mut out = vec![waypoints[0]];
    for w in waypoints.windows(2) {
        let (mut r, mut c) = w[0];
        while (r, c) != w[1] {
            if r != w[1].0 {
                r += (w[1].0 - r).signum();
            } else {
                c += (w[1].1 - c).signum();
            }
            out.push((r, c));
        }
    }
    out.dedup();
    out
}

impl Layout {
    pub fn path_index(&self, p: PairId, kind: PathKind) -> usize {
        let r = self.params.r;
        match kind {
            PathKind::Variable(i) => p * 3 * r + i,
            PathKind::Fixed(k) => p * 3 * r + 2 * r + k,
        }
    }

    pub fn var_path(&self, p: PairId, idx: usize) -> &RoutedPath {
        &self.paths[self.path_index(p, PathKind::Variable(idx))]
    }

    pub fn paths_in_brick(&self, b: BrickId) -> &[usize] {
        self.brick_paths.get(&b).map_or(&[], Vec::as_slice)
    }

    pub fn used_bricks(&self) -> impl Iterator<Item = BrickId> + '_ {
        self.brick_use.keys().copied()
    }

    /// The path owning a crossing edge.
    pub fn crossing_path(&self, e: Domino) -> Option<usize> {
        self.crossing.get(&e).copied()
    }

    /// Paths attached to a mini-square, with their attachment cell.
    pub fn mini_attachments(&self, mini: MiniId) -> &[(usize, GridCoord)] {
        &self.mini_paths[mini]
    }

    pub fn brick_origin(&self, b: BrickId) -> GridCoord {
        let bs = self.params.brick;
        GridCoord::new(2 + b.0 * bs, 2 + b.1 * bs)
    }

    /// Top-left brick of a mini-square.
    fn mini_bricks(&self, mini: MiniId) -> (i32, i32) {
        let (i, j) = self.system.super_of(mini);
        let d = self.system.diag_index(mini) as i32;
        let sb = self.params.super_bricks();
        let mb = self.params.mini_bricks();
        (i as i32 * sb + d * mb, j as i32 * sb + d * mb)
    }

    pub fn mini_origin(&self, mini: MiniId) -> GridCoord {
        if mini == self.system.survivor() {
            return GridCoord::new(1, 1);
        }
        let (r, c) = self.mini_bricks(mini);
        self.brick_origin((r, c))
    }

    pub fn mini_side(&self, mini: MiniId) -> i32 {
        if mini == self.system.survivor() {
            self.params.survivor_side()
        } else {
            self.params.mini_side()
        }
    }

    /// Which mini-square a brick belongs to, if any.
    pub fn brick_mini(&self, b: BrickId) -> Option<MiniId> {
        let sb = self.params.super_bricks();
        let mb = self.params.mini_bricks();
        let (si, sj) = (b.0.div_euclid(sb), b.1.div_euclid(sb));
        let (ri, rj) = (b.0.rem_euclid(sb) / mb, b.1.rem_euclid(sb) / mb);
        let m = self.system.m as i32;
        let inside = (0..m).contains(&si) && (0..m).contains(&sj);
        (inside && ri == rj && (ri as usize) < self.params.delta).then(|| self.system.mini((si as usize, sj as usize), ri as usize))
    }

    pub fn locate(&self, cell: GridCoord) -> Region {
        let bs = self.params.brick;
        let s1 = self.params.survivor_side();
        if cell.row <= s1 && cell.col <= s1 {
            return Region::Mini(self.system.survivor(), cell.row - 1, cell.col - 1);
        }
        if cell.row == 1 || cell.col == 1 {
            return Region::Strip;
        }
        let b = ((cell.row - 2) / bs, (cell.col - 2) / bs);
        match self.brick_mini(b) {
            Some(mini) => {
                let o = self.mini_origin(mini);
                Region::Mini(mini, cell.row - o.row, cell.col - o.col)
            }
            None => {
                let o = self.brick_origin(b);
                Region::Brick(b, cell.row - o.row, cell.col - o.col)
            }
        }
    }

    /// The strip partner of a row-1 or column-1 cell outside the survivor.
    pub fn strip_partner(&self, cell: GridCoord) -> Option<GridCoord> {
        let first = self.params.survivor_side() + 1;
        if cell.row == 1 && cell.col >= first {
            let c = if (cell.col - first) % 2 == 0 { cell.col + 1 } else { cell.col - 1 };
            return Some(GridCoord::new(1, c));
        }
        if cell.col == 1 && cell.row >= first {
            let r = if (cell.row - first) % 2 == 0 { cell.row + 1 } else { cell.row - 1 };
            return Some(GridCoord::new(r, 1));
        }
        None
    }

    pub fn summary(&self) -> LayoutSummary {
        LayoutSummary {
            n: self.params.n,
            m: self.system.m,
            super_side: self.params.super_side(),
            mini_side: self.params.mini_side(),
            minis: self.system.num_minis(),
            pairs: self.system.num_pairs(),
            paths: self.paths.len(),
            bricks_used: self.brick_use.len(),
            max_horizontal: self.brick_use.values().map(|u| u.horizontal).max().unwrap_or(0),
            max_vertical: self.brick_use.values().map(|u| u.vertical).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSummary {
    pub n: i32,
    pub m: usize,
    pub super_side: i32,
    pub mini_side: i32,
    pub minis: usize,
    pub pairs: usize,
    pub paths: usize,
    pub bricks_used: usize,
    pub max_horizontal: u8,
    pub max_vertical: u8,
}

/// Brick waypoints of bundle `k` between the two mini-squares of a pair.
fn waypoints(params: &LayoutParams, sys: &PathSystem, p: PairId, k: usize) -> (Vec<BrickId>, Dir) {
    let pair = sys.pair(p);
    let (i, j) = (sys.diag_index(pair.a) as i32, sys.diag_index(pair.b) as i32);
    let (si, sj): (SuperId, SuperId) = (sys.super_of(pair.a), sys.super_of(pair.b));
    let (delta, r, k) = (params.delta as i32, params.r as i32, k as i32);
    let (sb, mb) = (params.super_bricks(), params.mini_bricks());
    let x_src = delta * r + 2 * (j * r + k);
    let x_dst = delta * r + 2 * (i * r + k) + 1;
    let reserved = 4 * delta * delta * r + (i * delta + j) * r + k;
    // Along the super-square row (horizontal pairs) or column (vertical).
    let (band, along_src, along_dst) = match pair.orientation {
        Orientation::Horizontal => (si.0 as i32, si.1 as i32, sj.1 as i32),
        Orientation::Vertical => (si.1 as i32, si.0 as i32, sj.0 as i32),
    };
    let across_src = band * sb + i * mb + x_src;
    let across_dst = band * sb + j * mb + x_dst;
    let start = along_src * sb + i * mb + mb;
    let turn = along_src * sb + reserved;
    let end = along_dst * sb + j * mb - 1;
    let pts = [(across_src, start), (across_src, turn), (across_dst, turn), (across_dst, end)];
    match pair.orientation {
        Orientation::Horizontal => (pts.to_vec(), Dir::East),
        Orientation::Vertical => (pts.iter().map(|&(a, b)| (b, a)).collect(), Dir::South),
    }
}

/// Routes every path and checks the disjointness invariants as it goes.
pub fn build_layout(params: &LayoutParams) -> Result<Layout, RestrictionError> {
    params.validate()?;
    let sys = PathSystem::new(params.m(), params.delta, params.r);
    let bs = params.brick;
    let r = params.r;
    let mut layout = Layout {
        params: params.clone(),
        system: sys.clone(),
        paths: Vec::with_capacity(sys.num_pairs() * 3 * r),
        brick_use: BTreeMap::new(),
        brick_paths: HashMap::new(),
        crossing: HashMap::new(),
        mini_paths: vec![Vec::new(); sys.num_minis()],
    };
    let err = |m: String| RestrictionError::Layout(m);
    let per_side = params.bricks_per_side();
    let lo = bs / 2 - 3;
    let mut side_cells: HashSet<GridCoord> = HashSet::new();
    for p in 0..sys.num_pairs() {
        let pair = sys.pair(p);
        let white = sys.is_white(pair.a);
        let (var_par, fixed_par) = if white { (1, 0) } else { (0, 1) };
        let offsets_of = |par: i32| (lo..lo + 6).filter(move |o| o.rem_euclid(2) == par);
        let var_offsets: Vec<i32> = offsets_of(var_par).take(2).collect();
        let fixed_offset = offsets_of(fixed_par).next().expect("six offsets");
        let mut bundle_paths = Vec::with_capacity(3 * r);
        for k in 0..r {
            let (pts, dir0) = waypoints(params, &sys, p, k);
            let bricks = expand(&pts);
            for (idx, &b) in bricks.iter().enumerate() {
                if !(0..per_side).contains(&b.0) || !(0..per_side).contains(&b.1) {
                    return Err(err(format!("pair {p} bundle {k} leaves the grid at brick {b:?}")));
                }
                if let Some(mini) = layout.brick_mini(b) {
                    return Err(err(format!("pair {p} bundle {k} enters mini-square {mini} at brick {b:?}")));
                }
                let din = if idx == 0 { dir0 } else { Dir::from_delta(b.0 - bricks[idx - 1].0, b.1 - bricks[idx - 1].1).expect("unit step") };
                let dout = bricks.get(idx + 1).map_or(dir0, |n| Dir::from_delta(n.0 - b.0, n.1 - b.1).expect("unit step"));
                let u = layout.brick_use.entry(b).or_default();
                if is_horizontal(din) || is_horizontal(dout) {
                    u.horizontal += 1;
                }
                if !is_horizontal(din) || !is_horizontal(dout) {
                    u.vertical += 1;
                }
                if u.horizontal > 1 || u.vertical > 1 {
                    return Err(err(format!("brick {b:?} carries {} horizontal and {} vertical paths", u.horizontal, u.vertical)));
                }
            }
            let kinds = [
                (PathKind::Variable(2 * k), var_offsets[0]),
                (PathKind::Variable(2 * k + 1), var_offsets[1]),
                (PathKind::Fixed(k), fixed_offset),
            ];
            for (kind, o0) in kinds {
                let mut o = o0;
                let mut steps = Vec::with_capacity(bricks.len());
                for (idx, &b) in bricks.iter().enumerate() {
                    let din = if idx == 0 { dir0 } else { Dir::from_delta(b.0 - bricks[idx - 1].0, b.1 - bricks[idx - 1].1).expect("unit step") };
                    let dout = bricks.get(idx + 1).map_or(dir0, |n| Dir::from_delta(n.0 - b.0, n.1 - b.1).expect("unit step"));
                    let (er, ec) = side_cell(opposite(din), o, bs);
                    let same = side_cell(dout, o, bs);
                    let (xr, xc) = if (same.0 + same.1 - er - ec).rem_euclid(2) == 1 { same } else { side_cell(dout, o ^ 1, bs) };
                    if (xr, xc) != same {
                        o ^= 1;
                    }
                    let origin = layout.brick_origin(b);
                    let entry = GridCoord::new(origin.row + er, origin.col + ec);
                    let exit = GridCoord::new(origin.row + xr, origin.col + xc);
                    for c in [entry, exit] {
                        if !side_cells.insert(c) {
                            return Err(err(format!("cell {c} is used by two paths")));
                        }
                    }
                    steps.push(BrickStep { brick: b, entry, exit });
                }
                let (dr, dc) = dir0.delta();
                let first = steps[0].entry;
                let last = steps[steps.len() - 1].exit;
                let path = RoutedPath {
                    pair: p,
                    kind,
                    bundle: k,
                    src_attach: GridCoord::new(first.row - dr, first.col - dc),
                    dst_attach: GridCoord::new(last.row + dr, last.col + dc),
                    steps,
                };
                bundle_paths.push(path);
            }
        }
        // Variable paths first, then fixed, to match `path_index`.
        bundle_paths.sort_by_key(|path| match path.kind {
            PathKind::Variable(i) => i,
            PathKind::Fixed(k) => 2 * r + k,
        });
        for path in bundle_paths {
            let id = layout.paths.len();
            for e in path.crossing_edges() {
                if layout.crossing.insert(e, id).is_some() {
                    return Err(err(format!("edge {e:?} is crossed by two paths")));
                }
            }
            for s in &path.steps {
                layout.brick_paths.entry(s.brick).or_default().push(id);
            }
            for (mini, cell) in [(pair.a, path.src_attach), (pair.b, path.dst_attach)] {
                if !matches!(layout.locate(cell), Region::Mini(x, ..) if x == mini) {
                    return Err(err(format!("attachment {cell} of path {id} is not in mini-square {mini}")));
                }
                layout.mini_paths[mini].push((id, cell));
            }
            layout.paths.push(path);
        }
    }
    check_attachment_colors(&layout)?;
    Ok(layout)
}

/// In every bundle the two variable paths attach on one colour and the fixed
/// path on the other, at both ends.
fn check_attachment_colors(layout: &Layout) -> Result<(), RestrictionError> {
    let r = layout.params.r;
    for p in 0..layout.system.num_pairs() {
        for k in 0..r {
            let v0 = layout.var_path(p, 2 * k);
            let v1 = layout.var_path(p, 2 * k + 1);
            let fx = &layout.paths[layout.path_index(p, PathKind::Fixed(k))];
            for end in [|q: &RoutedPath| q.src_attach, |q: &RoutedPath| q.dst_attach] {
                let (a, b, c) = (end(v0).color(), end(v1).color(), end(fx).color());
                if a != b || a == c {
                    return Err(RestrictionError::Layout(format!("pair {p} bundle {k} attaches with colours {a:?} {b:?} {c:?}")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_turns() {
        assert_eq!(expand(&[(0, 0), (0, 2), (2, 2), (2, 3)]), vec![(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 3)]);
        assert_eq!(expand(&[(0, 0), (0, 0), (0, 1), (0, 1)]), vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn toy_layout_builds() {
        let l = build_layout(&LayoutParams::toy(1, 1)).unwrap();
        assert_eq!(l.paths.len(), l.system.num_pairs() * 3);
        let s = l.summary();
        assert!(s.max_horizontal <= 1 && s.max_vertical <= 1);
        assert_eq!(l.locate(GridCoord::new(1, 1)), Region::Mini(0, 0, 0));
        assert_eq!(l.locate(GridCoord::new(1, l.params.n)), Region::Strip);
    }
}
