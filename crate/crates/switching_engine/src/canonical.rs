use crate::world::{Info, MatchedPair, PartTree, Probe, Provenance, RhoWorld};
use crate::DecisionTree;
use restriction_space::{MiniId, SuperId};
use serde::Serialize;
use std::collections::BTreeMap;

/// A 1-branch of one part, with the probe answers it needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub part: usize,
    pub steps: Vec<(Probe, u8)>,
}

impl Branch {
    /// Mini-squares in order of first appearance.
    pub fn minis(&self) -> Vec<MiniId> {
        let mut out = Vec::new();
        for (p, _) in &self.steps {
            if !out.contains(&p.mini) {
                out.push(p.mini);
            }
        }
        out
    }
}

/// All 1-branches, part by part, depth first.
pub fn one_branches(parts: &[PartTree]) -> Vec<Branch> {
    parts
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.one_branches().into_iter().map(move |steps| Branch { part: i, steps }))
        .collect()
}

/// Tree for the conjunction of the given probe answers.
pub fn conjunction_tree(steps: &[(Probe, u8)]) -> PartTree {
    match steps.split_first() {
        None => DecisionTree::Leaf(true),
        Some(((probe, want), rest)) => DecisionTree::Query {
            query: *probe,
            children: (0..probe.arity).map(|a| (a, if a == *want { conjunction_tree(rest) } else { DecisionTree::Leaf(false) })).collect(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    /// Index into [`one_branches`].
    pub branch: usize,
    /// Forcing information for the branch, in branch order.
    pub j: Vec<MatchedPair>,
    /// What this stage learned: the `π₂` pairs of `j`, then query answers.
    pub i: Vec<MatchedPair>,
    pub followed: bool,
}

/// One path through the canonical tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalRun {
    pub stages: Vec<Stage>,
    /// `None` when the run hit the depth cap.
    pub label: Option<bool>,
    pub queries: Vec<(MiniId, MiniId)>,
}

impl CanonicalRun {
    pub fn depth(&self) -> usize {
        self.queries.len()
    }

    pub fn j_star(&self) -> Vec<MatchedPair> {
        self.stages.iter().flat_map(|s| s.j.iter().copied()).collect()
    }

    pub fn info(&self) -> Info {
        Info::from_pairs(self.stages.iter().flat_map(|s| s.i.iter().copied()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalTree {
    pub tree: DecisionTree<MiniId, MiniId>,
    pub runs: Vec<CanonicalRun>,
    /// Some branch needed more than the cap.
    pub exceeded: bool,
}

fn chosen_supers(world: &RhoWorld, info: &Info, extra: &[MatchedPair]) -> Vec<(SuperId, SuperId)> {
    let sys = world.sys;
    info.chosen_supers(sys)
        .into_iter()
        .chain(extra.iter().filter(|p| p.provenance == Provenance::Chosen).map(|p| (sys.super_of(p.a), sys.super_of(p.b))))
        .collect()
}

/// Forcing information for `branch`: pairs for its fresh mini-squares under
/// which every probe gives the wanted answer and the chosen pairs still
/// extend. Partners are tried in increasing order.
pub fn force_branch(world: &RhoWorld, branch: &Branch, info: &Info) -> Option<Vec<MatchedPair>> {
    fn rec(world: &RhoWorld, steps: &[(Probe, u8)], info: &Info, j: &mut Vec<MatchedPair>, jmap: &mut BTreeMap<MiniId, usize>) -> bool {
        let Some(((probe, want), rest)) = steps.split_first() else {
            return true;
        };
        let s = probe.mini;
        if let Some(h) = world.known(s, info) {
            return probe.answer(h) == *want && rec(world, rest, info, j, jmap);
        }
        if let Some(&k) = jmap.get(&s) {
            return probe.answer(world.hash_with(s, &j[k])) == *want && rec(world, rest, info, j, jmap);
        }
        let options: Vec<MatchedPair> = match world.pi2_partner(s) {
            Some(t) => world.matched(s, t, Provenance::Pi2).into_iter().collect(),
            None => world
                .partner_candidates(s, info)
                .into_iter()
                .filter(|t| !jmap.contains_key(t))
                .filter_map(|t| world.matched(s, t, Provenance::Chosen).ok())
                .collect(),
        };
        for mp in options {
            if probe.answer(world.hash_with(s, &mp)) != *want {
                continue;
            }
            j.push(mp);
            if mp.provenance == Provenance::Chosen && !world.grid.extendable(chosen_supers(world, info, j)) {
                j.pop();
                continue;
            }
            jmap.insert(mp.a, j.len() - 1);
            jmap.insert(mp.b, j.len() - 1);
            if rec(world, rest, info, j, jmap) {
                return true;
            }
            jmap.remove(&mp.a);
            jmap.remove(&mp.b);
            j.pop();
        }
        false
    }
    let mut j = Vec::new();
    rec(world, &branch.steps, info, &mut j, &mut BTreeMap::new()).then_some(j)
}

/// First branch that `ρ` plus `info` can be extended to follow.
pub fn first_forceable(world: &RhoWorld, branches: &[Branch], info: &Info) -> Option<(usize, Vec<MatchedPair>)> {
    branches.iter().enumerate().find_map(|(i, b)| force_branch(world, b, info).map(|j| (i, j)))
}

/// Every probe of the branch is determined by `info` and answers as wanted.
pub fn branch_followed(world: &RhoWorld, branch: &Branch, info: &Info) -> bool {
    branch.steps.iter().all(|(p, want)| world.known(p.mini, info).is_some_and(|h| p.answer(h) == *want))
}

struct Builder<'w, 'a> {
    world: &'w RhoWorld<'a>,
    branches: Vec<Branch>,
    cap: usize,
    early_exit: bool,
    stop: bool,
    exceeded: bool,
    runs: Vec<CanonicalRun>,
}

impl Builder<'_, '_> {
    fn finish(&mut self, mut run: CanonicalRun, label: Option<bool>) -> DecisionTree<MiniId, MiniId> {
        run.label = label;
        if label.is_none() {
            self.exceeded = true;
            self.stop |= self.early_exit;
        }
        self.runs.push(run);
        DecisionTree::Leaf(label == Some(true))
    }

    fn stage(&mut self, mut info: Info, mut run: CanonicalRun) -> DecisionTree<MiniId, MiniId> {
        let Some((b, j)) = first_forceable(self.world, &self.branches, &info) else {
            return self.finish(run, Some(false));
        };
        let pi2: Vec<MatchedPair> = j.iter().copied().filter(|p| p.provenance == Provenance::Pi2).collect();
        for p in &pi2 {
            info.push(*p);
        }
        let queue: Vec<MiniId> = j.iter().filter(|p| p.provenance == Provenance::Chosen).flat_map(|p| [p.a, p.b]).collect();
        run.stages.push(Stage { branch: b, j, i: pi2, followed: false });
        self.ask(info, run, &queue, b)
    }

    fn ask(&mut self, info: Info, mut run: CanonicalRun, queue: &[MiniId], b: usize) -> DecisionTree<MiniId, MiniId> {
        if self.stop {
            return DecisionTree::Leaf(false);
        }
        let Some(pos) = queue.iter().position(|&s| !info.contains(s)) else {
            if branch_followed(self.world, &self.branches[b], &info) {
                run.stages.last_mut().expect("a stage").followed = true;
                return self.finish(run, Some(true));
            }
            return self.stage(info, run);
        };
        if run.queries.len() >= self.cap {
            return self.finish(run, None);
        }
        let s = queue[pos];
        let mut children = Vec::new();
        for t in self.world.partner_candidates(s, &info) {
            let Ok(mp) = self.world.matched(s, t, Provenance::Chosen) else { continue };
            if !self.world.grid.extendable(chosen_supers(self.world, &info, &[mp])) {
                continue;
            }
            let mut next_info = info.clone();
            next_info.push(mp);
            let mut next_run = run.clone();
            next_run.queries.push((s, t));
            next_run.stages.last_mut().expect("a stage").i.push(mp);
            children.push((t, self.ask(next_info, next_run, &queue[pos..], b)));
            if self.stop {
                break;
            }
        }
        DecisionTree::Query { query: s, children }
    }
}

/// The canonical decision tree of the DNF `∨ parts` under `ρ` and `initial`.
/// Branches longer than `cap` are cut with a 0-leaf and flag `exceeded`.
pub fn canonical_tree(world: &RhoWorld, parts: &[PartTree], initial: &Info, cap: usize) -> CanonicalTree {
    let mut b = Builder { world, branches: one_branches(parts), cap, early_exit: false, stop: false, exceeded: false, runs: Vec::new() };
    let tree = b.stage(initial.clone(), CanonicalRun { stages: Vec::new(), label: None, queries: Vec::new() });
    CanonicalTree { tree, runs: b.runs, exceeded: b.exceeded }
}

/// Whether the canonical tree has depth above `cap`, stopping at the first
/// long branch. Returns that branch.
pub fn long_branch(world: &RhoWorld, parts: &[PartTree], initial: &Info, cap: usize) -> Option<CanonicalRun> {
    let mut b = Builder { world, branches: one_branches(parts), cap, early_exit: true, stop: false, exceeded: false, runs: Vec::new() };
    b.stage(initial.clone(), CanonicalRun { stages: Vec::new(), label: None, queries: Vec::new() });
    b.runs.into_iter().find(|r| r.label.is_none())
}

/// Value of `∨ parts` under a completion of `ρ`.
pub fn dnf_value(world: &RhoWorld, parts: &[PartTree], completion: &BTreeMap<SuperId, SuperId>) -> bool {
    parts.iter().any(|t| t.evaluate(|p| p.answer(world.completion_hash(p.mini, completion))) == Some(true))
}

/// Leaves whose label disagrees with some completion consistent with the
/// pairs learned on the way to them. Empty means the tree is correct.
pub fn brute_force_disagreements(world: &RhoWorld, parts: &[PartTree], tree: &CanonicalTree) -> Vec<usize> {
    let mut bad = Vec::new();
    for (k, run) in tree.runs.iter().enumerate() {
        let Some(label) = run.label else { continue };
        let fixed = run.info().chosen_supers(world.sys);
        for c in world.grid.completions(&fixed) {
            let mut map: BTreeMap<SuperId, SuperId> = BTreeMap::new();
            for (s, t) in fixed.iter().chain(&c) {
                map.insert(*s, *t);
                map.insert(*t, *s);
            }
            if dnf_value(world, parts, &map) != label {
                bad.push(k);
                break;
            }
        }
    }
    bad
}
