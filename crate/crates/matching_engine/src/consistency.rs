use crate::{well_cover, IntervalUnion, MatchingError, PartialMatching};
use grid_core::{tile, Domino, DominoMatching, Figure, GridCoord};
use serde::{Deserialize, Serialize};

pub const WITNESS_FACTOR: usize = 48;

/// Rows `s`, columns `t`, and a perfect matching of `s × t` extending some
/// partial matching.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionWitness {
    pub s: IntervalUnion,
    pub t: IntervalUnion,
    pub matching: DominoMatching,
}

impl ExtensionWitness {
    pub fn total_size(&self) -> usize {
        self.s.total_size() + self.t.total_size()
    }

    pub fn region(&self) -> Figure {
        product(&self.s, &self.t)
    }

    pub fn contains(&self, v: GridCoord) -> bool {
        self.s.contains(v.row as i64) && self.t.contains(v.col as i64)
    }

    pub fn partner(&self, v: GridCoord) -> Option<GridCoord> {
        self.matching.dominoes.iter().find_map(|d| d.other(v))
    }

    /// Structural check: even intervals inside the grid, a perfect matching
    /// of the product, and every edge of `m` present in it.
    pub fn certifies(&self, m: &PartialMatching, n: i64) -> bool {
        self.s.all_even()
            && self.t.all_even()
            && self.s.within(n)
            && self.t.within(n)
            && self.matching.is_perfect_for(&self.region())
            && m.edges().all(|e| self.matching.dominoes.binary_search(&e).is_ok())
    }

    /// [`certifies`](Self::certifies) plus the size bound `48 t`.
    pub fn is_valid_for(&self, m: &PartialMatching, n: i64) -> bool {
        self.total_size() <= WITNESS_FACTOR * m.len() && self.certifies(m, n)
    }
}

fn product(s: &IntervalUnion, t: &IntervalUnion) -> Figure {
    s.points()
        .flat_map(|r| t.points().map(move |c| GridCoord::new(r as i32, c as i32)))
        .collect()
}

fn complete(m: &PartialMatching, s: IntervalUnion, t: IntervalUnion) -> Option<ExtensionWitness> {
    let nodes = m.nodes();
    let region = product(&s, &t);
    if !nodes.iter().all(|c| region.contains(c)) {
        return None;
    }
    let rest = tile(&region.difference(&nodes))?;
    let matching = rest.dominoes.into_iter().chain(m.edges()).collect();
    Some(ExtensionWitness { s, t, matching })
}

fn around(coords: &[i64], margin: i64, n: i64) -> Option<IntervalUnion> {
    let pts = coords.iter().flat_map(|&x| (x - margin)..=(x + margin)).filter(|&x| (1..=n).contains(&x));
    IntervalUnion::from_points(pts).pad_to_even(n).ok()
}

/// Grows boxes around the rows and columns of `m` until the product minus `m`
/// tiles or the size bound is exceeded.
fn compact_witness(m: &PartialMatching, n: i64) -> Option<ExtensionWitness> {
    let nodes = m.nodes();
    let rows: Vec<i64> = nodes.iter().map(|c| c.row as i64).collect();
    let cols: Vec<i64> = nodes.iter().map(|c| c.col as i64).collect();
    let bound = WITNESS_FACTOR * m.len();
    for margin in 0..n {
        let (Some(s), Some(t)) = (around(&rows, margin, n), around(&cols, margin, n)) else {
            continue;
        };
        if s.total_size() + t.total_size() > bound {
            break;
        }
        if let Some(w) = complete(m, s, t) {
            return Some(w);
        }
    }
    None
}

/// Corner coordinates of all perimeter loops of the matched cells, projected
/// on one axis and clamped into the grid.
fn perimeter_multiset(m: &PartialMatching, n: i64, rows: bool) -> Vec<i64> {
    let mut out = Vec::new();
    for comp in m.nodes().components() {
        for lp in comp.perimeters() {
            for c in lp.corners() {
                let x = if rows { c.row } else { c.col } as i64;
                out.push(x.clamp(1, n));
            }
        }
    }
    out
}

fn cover_witness(m: &PartialMatching, n: i64) -> Option<ExtensionWitness> {
    let fix = |k: Vec<i64>| well_cover(&k, n).ok()?.clip(n).pad_to_even(n).ok();
    let s = fix(perimeter_multiset(m, n, true))?;
    let t = fix(perimeter_multiset(m, n, false))?;
    let per_set = WITNESS_FACTOR * m.len();
    if s.total_size() > per_set || t.total_size() > per_set {
        return None;
    }
    complete(m, s, t)
}

/// A witness for `m`, or `None`. Tries small boxes around the matched cells
/// first and then the well-cover construction on perimeter coordinates. The
/// second route is held to `48 t` per side rather than in total.
pub fn is_locally_consistent(m: &PartialMatching, n: i64) -> Option<ExtensionWitness> {
    if m.check_in_grid(n).is_err() {
        return None;
    }
    if m.is_empty() {
        return Some(ExtensionWitness::default());
    }
    compact_witness(m, n).or_else(|| cover_witness(m, n))
}

/// Smallest witness by total size (ties by interval lists), found by brute
/// force over all even-interval unions of `[1, n]`. Only for `n <= 16`.
pub fn exact_witness(m: &PartialMatching, n: i64) -> Option<ExtensionWitness> {
    assert!(n <= 16, "exact_witness enumerates 2^n interval unions");
    if m.check_in_grid(n).is_err() {
        return None;
    }
    if m.is_empty() {
        return Some(ExtensionWitness::default());
    }
    let nodes = m.nodes();
    let unions = |need: Vec<i64>| -> Vec<IntervalUnion> {
        let mut v: Vec<IntervalUnion> = (0u32..1 << n)
            .map(|mask| IntervalUnion::from_points((1..=n).filter(|x| mask >> (x - 1) & 1 == 1)))
            .filter(|u| u.all_even() && need.iter().all(|&x| u.contains(x)))
            .collect();
        v.sort_by_key(|u| (u.total_size(), u.intervals().to_vec()));
        v
    };
    let rows = unions(nodes.iter().map(|c| c.row as i64).collect());
    let cols = unions(nodes.iter().map(|c| c.col as i64).collect());
    let bound = WITNESS_FACTOR * m.len();
    let mut pairs: Vec<(&IntervalUnion, &IntervalUnion)> = rows
        .iter()
        .flat_map(|s| cols.iter().map(move |t| (s, t)))
        .filter(|(s, t)| s.total_size() + t.total_size() <= bound)
        .collect();
    pairs.sort_by_key(|(s, t)| s.total_size() + t.total_size());
    pairs.into_iter().find_map(|(s, t)| complete(m, s.clone(), t.clone()))
}

/// Even-izing partner for `x` joining `set`: the nearest of the two points
/// flanking the run of `set ∪ {x}` that contains `x`, smaller on ties.
fn flank(set: &IntervalUnion, x: i64, n: i64) -> Result<i64, MatchingError> {
    let grown = set.with_points([x]);
    let (lo, hi) = grown.run_of(x).expect("x was just added");
    let left = (lo > 1).then_some(lo - 1);
    let right = (hi < n).then_some(hi + 1);
    match (left, right) {
        (Some(l), Some(r)) => Ok(if x - l <= r - x { l } else { r }),
        (Some(l), None) => Ok(l),
        (None, Some(r)) => Ok(r),
        (None, None) => Err(MatchingError::Boundary { lo, hi, n }),
    }
}

fn pairs_in(u: &IntervalUnion) -> impl Iterator<Item = (i64, i64)> + '_ {
    u.intervals().iter().flat_map(|&(a, b)| (a..b).step_by(2).map(|x| (x, x + 1)))
}

/// Extends `m` by an edge at the unmatched node `v`, growing each side of
/// the witness by at most two.
pub fn extend_with_node(
    m: &PartialMatching,
    witness: &ExtensionWitness,
    v: GridCoord,
    n: i64,
) -> Result<(GridCoord, PartialMatching, ExtensionWitness), MatchingError> {
    let limit = n as f64 / 50.0 - 9.0;
    if m.len() as f64 > limit {
        return Err(MatchingError::Capacity { size: m.len(), limit, n });
    }
    if !v.in_grid(n as i32) {
        return Err(MatchingError::OutsideGrid(v));
    }
    if m.is_matched(v) {
        return Err(MatchingError::AlreadyMatched(v));
    }
    if !witness.certifies(m, n) {
        return Err(MatchingError::InvalidWitness);
    }
    let (a, b) = (v.row as i64, v.col as i64);
    let mut s = witness.s.clone();
    let mut t = witness.t.clone();
    let mut dominoes = witness.matching.dominoes.clone();
    let cell = |r: i64, c: i64| GridCoord::new(r as i32, c as i32);
    if !t.contains(b) {
        let b2 = flank(&t, b, n)?;
        for col in [b, b2] {
            dominoes.extend(pairs_in(&s).map(|(r1, r2)| Domino::new(cell(r1, col), cell(r2, col))));
        }
        t = t.with_points([b, b2]);
    }
    if !s.contains(a) {
        let a2 = flank(&s, a, n)?;
        for row in [a, a2] {
            dominoes.extend(pairs_in(&t).map(|(c1, c2)| Domino::new(cell(row, c1), cell(row, c2))));
        }
        s = s.with_points([a, a2]);
    }
    let matching: DominoMatching = dominoes.into_iter().collect();
    let w = matching.dominoes.iter().find_map(|d| d.other(v)).ok_or(MatchingError::InvalidWitness)?;
    let grown = m.with(v, w)?;
    Ok((w, grown, ExtensionWitness { s, t, matching }))
}
