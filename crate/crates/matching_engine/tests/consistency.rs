use grid_core::{tile, GridCoord};
use matching_engine::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g(r: i32, c: i32) -> GridCoord {
    GridCoord::new(r, c)
}

/// All grid edges inside the `side × side` window with top-left `(r0, c0)`.
fn window_edges(r0: i32, c0: i32, side: i32) -> Vec<(GridCoord, GridCoord)> {
    let mut out = Vec::new();
    for r in r0..r0 + side {
        for c in c0..c0 + side {
            if c + 1 < c0 + side {
                out.push((g(r, c), g(r, c + 1)));
            }
            if r + 1 < r0 + side {
                out.push((g(r, c), g(r + 1, c)));
            }
        }
    }
    out
}

/// Node-disjoint edge sets of size at most `k`.
fn matchings_upto(edges: &[(GridCoord, GridCoord)], k: usize) -> Vec<PartialMatching> {
    fn rec(edges: &[(GridCoord, GridCoord)], from: usize, cur: PartialMatching, k: usize, out: &mut Vec<PartialMatching>) {
        out.push(cur.clone());
        if cur.len() == k {
            return;
        }
        for i in from..edges.len() {
            if let Ok(next) = cur.with(edges[i].0, edges[i].1) {
                rec(edges, i + 1, next, k, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(edges, 0, PartialMatching::new(), k, &mut out);
    out
}

#[test]
fn every_subset_of_a_consistent_matching_is_consistent() {
    let n = 20;
    let mut consistent = 0;
    for (r0, c0) in [(1, 1), (9, 9), (17, 17)] {
        for m in matchings_upto(&window_edges(r0, c0, 4), 3) {
            if is_locally_consistent(&m, n).is_none() {
                continue;
            }
            consistent += 1;
            for sub in m.subsets() {
                let w = is_locally_consistent(&sub, n).unwrap_or_else(|| panic!("{sub:?} of {m:?}"));
                assert!(w.is_valid_for(&sub, n), "{sub:?}: {w:?}");
            }
        }
    }
    assert!(consistent > 1000);
}

#[test]
fn exact_and_heuristic_agree_on_tiny_grids() {
    let n = 5;
    for m in matchings_upto(&window_edges(1, 1, 5), 2) {
        let exact = exact_witness(&m, n);
        let fast = is_locally_consistent(&m, n);
        if let Some(w) = &fast {
            assert!(w.certifies(&m, n));
            assert!(exact.is_some(), "{m:?}");
        }
        if let Some(w) = &exact {
            assert!(w.is_valid_for(&m, n));
            if let Some(f) = &fast {
                assert!(w.total_size() <= f.total_size());
            }
        }
    }
}

#[test]
fn extension_trials() {
    let n = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let mut m = PartialMatching::new();
        if rng.gen_bool(0.5) {
            let a = g(rng.gen_range(1..=n), rng.gen_range(1..=n));
            let nbs: Vec<GridCoord> = a.neighbors().into_iter().filter(|c| c.in_grid(n)).collect();
            m.insert(a, nbs[rng.gen_range(0..nbs.len())]).unwrap();
        }
        let w = is_locally_consistent(&m, n as i64).unwrap();
        let v = loop {
            let v = g(rng.gen_range(1..=n), rng.gen_range(1..=n));
            if !m.is_matched(v) {
                break v;
            }
        };
        let (p, m2, w2) = extend_with_node(&m, &w, v, n as i64).unwrap();
        assert!(p.is_adjacent(v));
        assert_eq!(m2.partner(v), Some(p));
        assert!(w2.s.total_size() <= w.s.total_size() + 2);
        assert!(w2.t.total_size() <= w.t.total_size() + 2);
        assert!(w2.certifies(&m2, n as i64));
        assert!(tile(&w2.region().difference(&m2.nodes())).is_some());
    }
}

#[test]
fn extension_at_the_grid_edge() {
    let n = 500;
    let w = ExtensionWitness::default();
    for v in [g(1, 1), g(500, 500), g(1, 500), g(500, 1), g(250, 500)] {
        let (p, m2, w2) = extend_with_node(&PartialMatching::new(), &w, v, n).unwrap();
        assert!(p.in_grid(500));
        assert!(w2.is_valid_for(&m2, n));
    }
}

#[test]
fn extension_errors() {
    let m = PartialMatching::from_pairs([(g(1, 1), g(1, 2))]).unwrap();
    let w = is_locally_consistent(&m, 500).unwrap();
    assert_eq!(extend_with_node(&m, &w, g(1, 1), 500).unwrap_err(), MatchingError::AlreadyMatched(g(1, 1)));
    assert!(matches!(extend_with_node(&m, &w, g(0, 1), 500), Err(MatchingError::OutsideGrid(_))));
    assert!(matches!(extend_with_node(&m, &w, g(5, 5), 100), Err(MatchingError::Capacity { .. })));
    let bogus = ExtensionWitness::default();
    assert_eq!(extend_with_node(&m, &bogus, g(5, 5), 500).unwrap_err(), MatchingError::InvalidWitness);
}

#[test]
fn witness_json_round_trip() {
    let m = PartialMatching::from_pairs([(g(3, 3), g(4, 3))]).unwrap();
    let w = is_locally_consistent(&m, 30).unwrap();
    let back: ExtensionWitness = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(back, w);
    let mj: PartialMatching = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(mj, m);
}

proptest! {
    #[test]
    fn well_cover_contract(k in prop::collection::vec(1i64..=200, 0..=12)) {
        let s = well_cover(&k, 200).unwrap();
        prop_assert!(s.all_even());
        prop_assert!(s.total_size() <= 6 * k.len());
        prop_assert!(s.well_covers(&k));
    }

    #[test]
    fn profile_matches_direct_count(a in 1i64..50, len in 1i64..30, k in prop::collection::vec(0i64..30, 0..10)) {
        let b = a + len - 1;
        let k: Vec<i64> = k.into_iter().map(|x| a + x % len).collect();
        let p = LeftRightProfile::new((a, b), &k);
        for i in a..=b {
            // Twice the points left of i outside K, minus half the K points in (a, i].
            let free = (a + 1..=i).filter(|x| !k.contains(x)).count() as f64;
            let hits = k.iter().filter(|&&x| a < x && x <= i).count() as f64;
            prop_assert_eq!(p.f_l(i), 2.0 * free - hits / 2.0);
        }
    }

    #[test]
    fn random_small_matchings_get_valid_witnesses(
        cells in prop::collection::vec((1i32..=30, 1i32..=30, any::<bool>()), 1..=4)
    ) {
        let mut m = PartialMatching::new();
        for (r, c, horiz) in cells {
            let b = if horiz { g(r, c + 1) } else { g(r + 1, c) };
            if b.in_grid(30) {
                let _ = m.insert(g(r, c), b);
            }
        }
        if let Some(w) = is_locally_consistent(&m, 30) {
            prop_assert!(w.certifies(&m, 30));
            for sub in m.subsets() {
                let ws = is_locally_consistent(&sub, 30);
                prop_assert!(ws.is_some());
                prop_assert!(ws.unwrap().is_valid_for(&sub, 30));
            }
        }
    }
}
