use crate::MatchingError;
use grid_core::{tile, Color, Domino, DominoMatching, Figure, GridCoord};
use std::collections::BTreeSet;

fn g(r: i32, c: i32) -> GridCoord {
    GridCoord::new(r, c)
}

/// Cells of ring `k` of a side-`s` square, clockwise from `(k, k)`, each with
/// its inward neighbour (`None` at the ring's corners).
fn ring(s: i32, k: i32) -> Vec<(GridCoord, Option<GridCoord>)> {
    let l = s - 2 * k;
    let (lo, hi) = (k, k + l - 1);
    let mut out = Vec::with_capacity(4 * (l as usize - 1));
    let corner = |r: i32, c: i32| (r == lo || r == hi) && (c == lo || c == hi);
    let mut push = |r: i32, c: i32, inward: GridCoord| {
        out.push((g(r, c), (!corner(r, c)).then_some(inward)));
    };
    for c in lo..hi {
        push(lo, c, g(lo + 1, c));
    }
    for r in lo..hi {
        push(r, hi, g(r, hi - 1));
    }
    for c in (lo + 1..=hi).rev() {
        push(hi, c, g(hi - 1, c));
    }
    for r in (lo + 1..=hi).rev() {
        push(r, lo, g(r, lo + 1));
    }
    out
}

fn pair_run(cells: &[(GridCoord, Option<GridCoord>)], out: &mut Vec<Domino>) {
    for p in cells.chunks(2) {
        out.push(Domino::new(p[0].0, p[1].0));
    }
}

/// Peels the square ring by ring. On each ring the cells between consecutive
/// dents are paired along the ring; an odd stretch sends one cell inward,
/// which becomes a dent of the next ring. Push positions are tried from the
/// end of each stretch backwards, depth first. Local 0-based coordinates with
/// `(0, 0)` white.
pub fn onion_match(side: i32, dents: &BTreeSet<GridCoord>) -> Result<DominoMatching, MatchingError> {
    if side < 0 {
        return Err(MatchingError::Infeasible(format!("negative side {side}")));
    }
    if let Some(d) = dents.iter().find(|d| !(0..side).contains(&d.row) || !(0..side).contains(&d.col)) {
        return Err(MatchingError::Infeasible(format!("dent {d} outside the square")));
    }
    let mut out = Vec::new();
    if peel(side, 0, dents.clone(), &mut out) {
        Ok(out.into_iter().collect())
    } else {
        Err(MatchingError::Infeasible(format!("onion peeling failed on side {side}")))
    }
}

fn peel(side: i32, k: i32, mut dents: BTreeSet<GridCoord>, out: &mut Vec<Domino>) -> bool {
    let l = side - 2 * k;
    if l <= 0 {
        return dents.is_empty();
    }
    if l == 1 {
        return dents.len() == 1 && dents.contains(&g(k, k));
    }
    let cells = ring(side, k);
    let marks: Vec<usize> = (0..cells.len()).filter(|&i| dents.contains(&cells[i].0)).collect();
    if marks.is_empty() {
        let mark = out.len();
        pair_run(&cells, out);
        if peel(side, k + 1, dents, out) {
            return true;
        }
        out.truncate(mark);
        return false;
    }
    for &i in &marks {
        dents.remove(&cells[i].0);
    }
    let first = *marks.iter().min_by_key(|&&i| cells[i].0).expect("nonempty");
    let rotated: Vec<_> = cells[first..].iter().chain(&cells[..first]).copied().collect();
    let offsets: Vec<usize> = marks.iter().map(|&i| (i + cells.len() - first) % cells.len()).collect();
    let mut sorted = offsets;
    sorted.sort_unstable();
    let segments: Vec<&[(GridCoord, Option<GridCoord>)]> = sorted
        .iter()
        .enumerate()
        .map(|(idx, &p)| &rotated[p + 1..sorted.get(idx + 1).copied().unwrap_or(rotated.len())])
        .collect();
    segments_from(side, k, &segments, dents, out)
}

fn segments_from(
    side: i32,
    k: i32,
    segments: &[&[(GridCoord, Option<GridCoord>)]],
    dents: BTreeSet<GridCoord>,
    out: &mut Vec<Domino>,
) -> bool {
    let Some((seg, rest)) = segments.split_first() else {
        return peel(side, k + 1, dents, out);
    };
    let mark = out.len();
    if seg.len() % 2 == 0 {
        pair_run(seg, out);
        if segments_from(side, k, rest, dents, out) {
            return true;
        }
        out.truncate(mark);
        return false;
    }
    for e in (0..seg.len()).rev().step_by(2) {
        let (cell, Some(inner)) = seg[e] else { continue };
        if dents.contains(&inner) {
            continue;
        }
        out.push(Domino::new(cell, inner));
        pair_run(&seg[..e], out);
        pair_run(&seg[e + 1..], out);
        let mut next = dents.clone();
        next.insert(inner);
        if segments_from(side, k, rest, next, out) {
            return true;
        }
        out.truncate(mark);
    }
    false
}

/// Distance from a boundary cell to the nearest corner along the boundary.
pub fn corner_distance(side: i32, c: GridCoord) -> Option<i32> {
    let last = side - 1;
    let mut best = None;
    let mut consider = |x: i32| best = Some(best.map_or(x.min(last - x), |b: i32| b.min(x).min(last - x)));
    if c.row == 0 || c.row == last {
        consider(c.col);
    }
    if c.col == 0 || c.col == last {
        consider(c.row);
    }
    best
}

/// [`onion_match`] behind the dented-square hypotheses: dents on
/// the boundary, at most `m_bound` of them, none within `m_bound` of a
/// corner, and colours balanced against the square.
pub fn match_square_with_dents(
    side: i32,
    dents: &BTreeSet<GridCoord>,
    m_bound: usize,
) -> Result<DominoMatching, MatchingError> {
    let bad = |msg: String| Err(MatchingError::Infeasible(msg));
    if side < 1 {
        return bad(format!("side {side}"));
    }
    if dents.len() > m_bound {
        return bad(format!("{} dents exceed the bound {m_bound}", dents.len()));
    }
    for &d in dents {
        match corner_distance(side, d) {
            Some(x) if x >= 0 && (x as usize) >= m_bound => {}
            Some(x) if x >= 0 => return bad(format!("dent {d} is {x} from a corner")),
            _ => return bad(format!("dent {d} is not on the boundary")),
        }
    }
    let white = dents.iter().filter(|d| d.color() == Color::White).count();
    let black = dents.len() - white;
    let extra = (side % 2) as usize;
    if white != black + extra {
        return bad(format!("{white} white and {black} black dents on side {side}"));
    }
    let m = onion_match(side, dents)?;
    debug_assert!(m.is_perfect_for(&dented_square(side, dents)));
    Ok(m)
}

fn dented_square(side: i32, dents: &BTreeSet<GridCoord>) -> Figure {
    (0..side).flat_map(|r| (0..side).map(move |c| g(r, c))).filter(|c| !dents.contains(c)).collect()
}

/// Onion peeling without the hypotheses, falling back to a general tiling
/// when peeling gets stuck.
pub fn match_dented_square(side: i32, dents: &BTreeSet<GridCoord>) -> Option<DominoMatching> {
    onion_match(side, dents).ok().or_else(|| tile(&dented_square(side, dents)))
}
