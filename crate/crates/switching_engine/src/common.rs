use crate::canonical::{canonical_tree, long_branch, CanonicalRun, CanonicalTree};
use crate::world::{Info, PartTree, Provenance, RhoWorld};
use crate::DecisionTree;
use restriction_space::MiniId;
use serde::Serialize;
use std::collections::BTreeSet;

/// One round of the common tree: the family whose canonical tree under the
/// current information had a branch longer than `ℓ`, and that branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub family: usize,
    pub run: CanonicalRun,
    pub queried: Vec<MiniId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonLeaf {
    pub info: Info,
    pub rounds: Vec<Round>,
    /// Canonical tree of every family under `info`, each of depth at most `ℓ`.
    pub evaluations: Vec<CanonicalTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonTree {
    pub tree: DecisionTree<MiniId, MiniId>,
    pub leaves: Vec<CommonLeaf>,
    /// Some branch needed more than the cap.
    pub exceeded: bool,
}

struct Builder<'w, 'a> {
    world: &'w RhoWorld<'a>,
    families: &'w [Vec<PartTree>],
    ell: usize,
    cap: usize,
    exceeded: bool,
    leaves: Vec<CommonLeaf>,
}

impl Builder<'_, '_> {
    fn node(&mut self, info: Info, rounds: Vec<Round>, depth: usize) -> DecisionTree<MiniId, MiniId> {
        let long = self.families.iter().enumerate().find_map(|(f, parts)| long_branch(self.world, parts, &info, self.ell).map(|r| (f, r)));
        let Some((family, run)) = long else {
            let evaluations = self.families.iter().map(|parts| canonical_tree(self.world, parts, &info, self.ell)).collect();
            self.leaves.push(CommonLeaf { info, rounds, evaluations });
            return DecisionTree::Leaf(true);
        };
        let mut info = info;
        let mut queue: Vec<MiniId> = Vec::new();
        for stage in &run.stages {
            for mp in stage.j.iter().filter(|p| p.provenance == Provenance::Pi2) {
                info.push(*mp);
            }
            for mp in stage.j.iter().chain(&stage.i).filter(|p| p.provenance == Provenance::Chosen) {
                for s in [mp.a, mp.b] {
                    if !queue.contains(&s) && !info.contains(s) {
                        queue.push(s);
                    }
                }
            }
        }
        let mut rounds = rounds;
        rounds.push(Round { family, run, queried: Vec::new() });
        self.ask(info, rounds, queue, depth)
    }

    fn ask(&mut self, info: Info, mut rounds: Vec<Round>, queue: Vec<MiniId>, depth: usize) -> DecisionTree<MiniId, MiniId> {
        let Some(pos) = queue.iter().position(|&s| !info.contains(s)) else {
            return self.node(info, rounds, depth);
        };
        if depth >= self.cap {
            self.exceeded = true;
            self.leaves.push(CommonLeaf { info, rounds, evaluations: Vec::new() });
            return DecisionTree::Leaf(false);
        }
        let s = queue[pos];
        rounds.last_mut().expect("a round").queried.push(s);
        let mut children = Vec::new();
        for t in self.world.partner_candidates(s, &info) {
            let Ok(mp) = self.world.matched(s, t, Provenance::Chosen) else { continue };
            let mut pairs = info.chosen_supers(self.world.sys);
            pairs.push((self.world.sys.super_of(s), self.world.sys.super_of(t)));
            if !self.world.grid.extendable(pairs) {
                continue;
            }
            let mut next = info.clone();
            next.push(mp);
            children.push((t, self.ask(next, rounds.clone(), queue[pos + 1..].to_vec(), depth + 1)));
        }
        DecisionTree::Query { query: s, children }
    }
}

/// A tree over partner queries after which every family has a canonical
/// tree of depth at most `ell`. Branches longer than `cap` end in a 0-leaf
/// and flag `exceeded`.
pub fn common_tree(world: &RhoWorld, families: &[Vec<PartTree>], ell: usize, cap: usize) -> CommonTree {
    let mut b = Builder { world, families, ell, cap, exceeded: false, leaves: Vec::new() };
    let tree = b.node(Info::default(), Vec::new(), 0);
    CommonTree { tree, leaves: b.leaves, exceeded: b.exceeded }
}

impl CommonLeaf {
    /// Mini-squares of the forcing pairs of each round.
    pub fn j_supports(&self) -> Vec<BTreeSet<MiniId>> {
        self.rounds.iter().map(|r| r.run.j_star().iter().flat_map(|p| [p.a, p.b]).collect()).collect()
    }
}
