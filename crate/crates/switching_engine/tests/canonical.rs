use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use restriction_space::{sample_partial_on, PartialOptions, PartialRestriction, PathSystem, Profile, TauMode};
use std::collections::BTreeSet;
use switching_engine::*;

fn sample(sys: &PathSystem, k: usize, seed: u64, spec: DnfSpec) -> (PartialRestriction, Vec<PartTree>) {
    let opts = PartialOptions { k: Some(k), c: 1.0, n: 451, restart_cap: 200, profile: Profile::Toy, tau: TauMode::Conditioned };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = sample_partial_on(sys, &opts, &mut rng).unwrap();
    let parts = random_dnf(sys, spec, &mut rng);
    (rho, parts)
}

const DNF: DnfSpec = DnfSpec { terms: 6, width: 3, arity: 2 };

#[test]
fn canonical_leaves_agree_with_every_completion() {
    for (m, delta, r, k) in [(3, 1, 1, 0), (3, 2, 1, 2), (5, 1, 1, 0), (5, 2, 2, 4)] {
        let sys = PathSystem::new(m, delta, r);
        for seed in 0..30 {
            let (rho, parts) = sample(&sys, k, seed, DNF);
            let world = RhoWorld::new(&sys, &rho).unwrap();
            let ct = canonical_tree(&world, &parts, &Info::default(), 12);
            assert!(brute_force_disagreements(&world, &parts, &ct).is_empty(), "m={m} Δ={delta} seed {seed}");
            assert_eq!(ct.runs.len(), ct.tree.leaves().len());
        }
    }
}

#[test]
fn round_trip_on_long_branches() {
    let sys = PathSystem::new(5, 2, 2);
    let mut done = 0;
    for seed in 0..400 {
        let (rho, parts) = sample(&sys, 4, seed, DNF);
        let world = RhoWorld::new(&sys, &rho).unwrap();
        let ct = canonical_tree(&world, &parts, &Info::default(), 16);
        let Some(run) = ct.runs.iter().filter(|r| r.label.is_some()).max_by_key(|r| r.depth()) else { continue };
        if run.depth() < 2 {
            continue;
        }
        let enc = encode(&world, &parts, run).unwrap();
        let info = ExternalInfo::from_hex(&enc.info.to_hex()).unwrap();
        let dec = decode(&sys, &parts, &enc.star, &info).unwrap();
        assert_eq!(dec.rho, rho);
        let strip = |s: &[Stage]| s.iter().map(|x| (x.branch, x.j.clone(), x.i.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&dec.stages), strip(&run.stages));
        assert!(forced_by_star(&sys, &parts, &enc.star).unwrap().contains(&run.stages[0].branch));
        done += 1;
        if done == 100 {
            break;
        }
    }
    assert_eq!(done, 100);
}

#[test]
fn corrupted_information_does_not_decode_to_rho() {
    let sys = PathSystem::new(5, 2, 2);
    let (rho, parts) = sample(&sys, 4, 7, DNF);
    let world = RhoWorld::new(&sys, &rho).unwrap();
    let ct = canonical_tree(&world, &parts, &Info::default(), 16);
    let run = ct.runs.iter().filter(|r| r.label.is_some()).max_by_key(|r| r.depth()).unwrap();
    let enc = encode(&world, &parts, run).unwrap();
    let mut short = enc.info.clone();
    short.bytes.pop();
    assert!(decode(&sys, &parts, &enc.star, &short).is_err());
    let mut long = enc.info.clone();
    long.bytes.push(0);
    assert!(decode(&sys, &parts, &enc.star, &long).is_err());
}

#[test]
fn empty_forcing_leaves_rho_unchanged() {
    let sys = PathSystem::new(3, 2, 1);
    let (rho, _) = sample(&sys, 2, 1, DNF);
    let world = RhoWorld::new(&sys, &rho).unwrap();
    let parts = vec![DecisionTree::Leaf(true)];
    let ct = canonical_tree(&world, &parts, &Info::default(), 4);
    assert_eq!(ct.tree, DecisionTree::Leaf(true));
    let star = build_star(&world, &ct.runs[0]).unwrap();
    assert_eq!(star.quad, rho.quad);
    assert!(star.holes.is_empty());
}

#[test]
fn width_zero_terms_never_need_queries() {
    let sys = PathSystem::new(5, 1, 1);
    for seed in 0..10 {
        let (rho, parts) = sample(&sys, 0, seed, DnfSpec { terms: 3, width: 0, arity: 2 });
        let world = RhoWorld::new(&sys, &rho).unwrap();
        assert!(long_branch(&world, &parts, &Info::default(), 0).is_none());
        assert_eq!(canonical_tree(&world, &parts, &Info::default(), 0).tree.depth(), 0);
    }
}

#[test]
fn unsatisfiable_dnf_gives_a_zero_leaf() {
    let sys = PathSystem::new(3, 2, 1);
    let (rho, _) = sample(&sys, 2, 3, DNF);
    let world = RhoWorld::new(&sys, &rho).unwrap();
    let ct = canonical_tree(&world, &[DecisionTree::Leaf(false)], &Info::default(), 4);
    assert_eq!(ct.tree, DecisionTree::Leaf(false));
}

#[test]
fn holes_are_rejected_by_the_world() {
    let sys = PathSystem::new(3, 2, 1);
    let (mut rho, _) = sample(&sys, 2, 3, DNF);
    rho.quad.u[4] = None;
    assert!(matches!(RhoWorld::new(&sys, &rho), Err(SwitchingError::Hole((1, 1)))));
}

#[test]
fn reduced_grid_counts_tilings() {
    let g = ReducedGrid::new(3).unwrap();
    assert_eq!(g.completions(&[]).len(), 4);
    assert!(g.extendable([((0, 1), (1, 1))]));
    assert!(!g.extendable([((0, 1), (1, 2))]));
    assert_eq!(g.completions(&[((0, 1), (1, 1))]).len(), 1);
    assert!(!g.extendable([((0, 1), (1, 1)), ((1, 1), (1, 2))]));
}

#[test]
fn common_tree_rounds() {
    let sys = PathSystem::new(5, 2, 2);
    let ell = 2;
    let mut rounds_seen = 0;
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (rho, _) = sample(&sys, 4, seed, DNF);
        let families = random_family(&sys, DNF, 3, &mut rng);
        let world = RhoWorld::new(&sys, &rho).unwrap();
        let ct = common_tree(&world, &families, ell, 12);
        for leaf in &ct.leaves {
            for round in &leaf.rounds {
                assert!(round.queried.len() <= 4 * round.run.j_star().len(), "{:?} {:?}", round.queried, round.run);
                rounds_seen += 1;
            }
            let supports = leaf.j_supports();
            let mut seen = BTreeSet::new();
            for s in &supports {
                assert!(s.iter().all(|x| seen.insert(*x)), "seed {seed}: forcing supports overlap");
            }
            if !ct.exceeded {
                assert!(leaf.evaluations.iter().all(|t| !t.exceeded && t.tree.depth() <= ell));
            }
        }
    }
    assert!(rounds_seen > 0);
}

#[test]
fn shallow_families_give_a_single_leaf() {
    let sys = PathSystem::new(3, 2, 1);
    let (rho, _) = sample(&sys, 2, 5, DNF);
    let world = RhoWorld::new(&sys, &rho).unwrap();
    let families = vec![vec![DecisionTree::Leaf(true)], vec![DecisionTree::Leaf(false)]];
    let ct = common_tree(&world, &families, 0, 4);
    assert_eq!(ct.tree, DecisionTree::Leaf(true));
    assert_eq!(ct.leaves.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_finished_run_round_trips(seed in 0u64..10_000, delta in 1usize..=3, terms in 1usize..8, width in 1usize..4) {
        let sys = PathSystem::new(5, delta, 1);
        let k = if delta == 1 { 0 } else { 2 * delta };
        let (rho, parts) = sample(&sys, k, seed, DnfSpec { terms, width, arity: 2 });
        let world = RhoWorld::new(&sys, &rho).unwrap();
        let ct = canonical_tree(&world, &parts, &Info::default(), 8);
        prop_assert!(brute_force_disagreements(&world, &parts, &ct).is_empty());
        for run in ct.runs.iter().filter(|r| r.label.is_some()) {
            let enc = encode(&world, &parts, run).unwrap();
            prop_assert_eq!(decode(&sys, &parts, &enc.star, &enc.info).unwrap().rho, rho.clone());
        }
    }
}
