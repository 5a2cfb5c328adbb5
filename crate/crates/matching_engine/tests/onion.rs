use grid_core::{Color, Figure, GridCoord};
use matching_engine::*;
use std::collections::BTreeSet;

fn g(r: i32, c: i32) -> GridCoord {
    GridCoord::new(r, c)
}

fn square_minus(side: i32, dents: &BTreeSet<GridCoord>) -> Figure {
    (0..side).flat_map(|r| (0..side).map(move |c| g(r, c))).filter(|c| !dents.contains(c)).collect()
}

/// Subsets of size at most two of `positions`.
fn small_subsets(positions: &[i32]) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for (i, &a) in positions.iter().enumerate() {
        out.push(vec![a]);
        for &b in &positions[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out
}

/// All dent sets with at most two dents per side, `d` dents in total, every
/// dent at least `d` from a corner.
fn dent_sets(side: i32, d: usize) -> Vec<BTreeSet<GridCoord>> {
    let lo = d as i32;
    let hi = side - 1 - d as i32;
    let positions: Vec<i32> = (lo..=hi).collect();
    let subsets = small_subsets(&positions);
    let last = side - 1;
    let mut out = Vec::new();
    for top in &subsets {
        for bottom in &subsets {
            for left in &subsets {
                for right in &subsets {
                    if top.len() + bottom.len() + left.len() + right.len() != d {
                        continue;
                    }
                    let set: BTreeSet<GridCoord> = top
                        .iter()
                        .map(|&j| g(0, j))
                        .chain(bottom.iter().map(|&j| g(last, j)))
                        .chain(left.iter().map(|&i| g(i, 0)))
                        .chain(right.iter().map(|&i| g(i, last)))
                        .collect();
                    out.push(set);
                }
            }
        }
    }
    out
}

fn balanced(side: i32, dents: &BTreeSet<GridCoord>) -> bool {
    let w = dents.iter().filter(|d| d.color() == Color::White).count();
    w == dents.len() - w + (side % 2) as usize
}

#[test]
fn six_dents_near_corners_are_untileable() {
    // Three white and three black dents on a side-8 square, two of them one
    // step from a corner. The corner between (0,6) and (3,7) traps four black
    // cells against three white ones.
    let dents: BTreeSet<GridCoord> = [g(0, 4), g(0, 6), g(3, 7), g(7, 2), g(7, 4), g(1, 0)].into();
    assert_eq!(dents.iter().filter(|d| d.is_white()).count(), 3);
    assert!(match_square_with_dents(8, &dents, 6).is_err());
    assert!(onion_match(8, &dents).is_err());
    assert!(match_dented_square(8, &dents).is_none());
    let cert = grid_core::find_negative_certificate(&square_minus(8, &dents)).unwrap();
    assert_eq!((cert.figure.black_count(), cert.figure.white_count()), (4, 3));
    assert!(cert.figure.contains(g(0, 7)));
}

#[test]
fn three_and_three_dents_away_from_corners() {
    let dents: BTreeSet<GridCoord> = [g(0, 6), g(0, 7), g(6, 13), g(7, 13), g(13, 6), g(13, 7)].into();
    let m = match_square_with_dents(14, &dents, 6).unwrap();
    assert!(m.is_perfect_for(&square_minus(14, &dents)));
    assert_eq!(m.len(), (196 - 6) / 2);
    assert_eq!(match_square_with_dents(14, &dents, 6).unwrap(), m);
}

#[test]
fn fallback_handles_tileable_squares_the_peel_misses() {
    let mut missed = 0;
    for a in 0..8 {
        for b in 0..8 {
            let dents: BTreeSet<GridCoord> = [g(0, a), g(7, b)].into();
            if dents.len() < 2 || dents.iter().filter(|d| d.is_white()).count() != 1 {
                continue;
            }
            let region = square_minus(8, &dents);
            let expected = grid_core::tile(&region).is_some();
            let got = match_dented_square(8, &dents);
            assert_eq!(got.is_some(), expected);
            if let Some(m) = got {
                assert!(m.is_perfect_for(&region));
            }
            missed += usize::from(expected && onion_match(8, &dents).is_err());
        }
    }
    assert!(missed < 64);
}

#[test]
fn exhaustive_small_squares() {
    let mut checked = 0;
    for side in 1..=12 {
        for d in 0..=8usize {
            if 2 * d as i32 > side - 1 && d > 0 {
                break;
            }
            for dents in dent_sets(side, d) {
                if !balanced(side, &dents) {
                    continue;
                }
                let m = match_square_with_dents(side, &dents, d)
                    .unwrap_or_else(|e| panic!("side {side} dents {dents:?}: {e}"));
                assert!(m.is_perfect_for(&square_minus(side, &dents)), "side {side} dents {dents:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn guard_failures_are_reported() {
    let two: BTreeSet<GridCoord> = [g(0, 2), g(0, 4)].into();
    assert!(matches!(match_square_with_dents(8, &two, 2), Err(MatchingError::Infeasible(_))));
    let inner: BTreeSet<GridCoord> = [g(3, 3), g(3, 4)].into();
    assert!(match_square_with_dents(8, &inner, 2).is_err());
    assert!(match_square_with_dents(8, &[g(0, 3), g(0, 4)].into(), 1).is_err());
}
