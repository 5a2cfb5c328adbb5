use crate::{DecisionTree, SwitchingError};
use grid_core::{Domino, GridCoord};
use matching_engine::{is_locally_consistent, PartialMatching};

/// Asks for the partner of a node; children are keyed by the partner.
pub type MatchQueryTree = DecisionTree<GridCoord, GridCoord>;

/// Partners `w` of `v` such that `τ ∪ {v–w}` is still locally consistent.
/// A node already matched in `τ` has only its partner.
pub fn consistent_answers(v: GridCoord, tau: &PartialMatching, n: i32) -> Vec<GridCoord> {
    if let Some(w) = tau.partner(v) {
        return vec![w];
    }
    v.neighbors()
        .into_iter()
        .filter(|w| w.in_grid(n) && !tau.is_matched(*w))
        .filter(|&w| tau.with(v, w).is_ok_and(|m| is_locally_consistent(&m, n as i64).is_some()))
        .collect()
}

/// Depth plus `|τ|` may not exceed `n/50`.
pub fn check_capacity(depth: usize, tau_len: usize, n: i32) -> Result<(), SwitchingError> {
    let limit = n as f64 / 50.0;
    let value = (depth + tau_len) as f64;
    if value > limit {
        return Err(SwitchingError::Capacity { what: "depth plus restriction size", value, limit });
    }
    Ok(())
}

/// Restriction of `tree` to `τ` without the capacity check: queries answered
/// by `τ` are spliced out and answers inconsistent with `τ` plus the answers
/// above them are dropped. A query may end up with no children.
pub fn restrict(tree: &MatchQueryTree, tau: &PartialMatching, n: i32) -> MatchQueryTree {
    match tree {
        DecisionTree::Leaf(b) => DecisionTree::Leaf(*b),
        DecisionTree::Query { query, children } => {
            if let Some(w) = tau.partner(*query) {
                return match children.iter().find(|(a, _)| *a == w) {
                    Some((_, c)) => restrict(c, tau, n),
                    None => DecisionTree::Query { query: *query, children: Vec::new() },
                };
            }
            let kept = children
                .iter()
                .filter_map(|(w, c)| {
                    let ext = tau.with(*query, *w).ok()?;
                    is_locally_consistent(&ext, n as i64)?;
                    Some((*w, restrict(c, &ext, n)))
                })
                .collect();
            DecisionTree::Query { query: *query, children: kept }
        }
    }
}

/// `T ⌈ τ`. Fails when the tree is too deep for `τ` or when no branch
/// survives.
pub fn prune(tree: &MatchQueryTree, tau: &PartialMatching, n: i32) -> Result<MatchQueryTree, SwitchingError> {
    check_capacity(tree.depth(), tau.len(), n)?;
    let out = restrict(tree, tau, n);
    if out.leaves().is_empty() {
        return Err(SwitchingError::EmptyPrune);
    }
    Ok(out)
}

/// Value of `x_e` once one endpoint of `e` is matched in `m`.
pub fn edge_value(e: Domino, m: &PartialMatching) -> Option<bool> {
    let (a, b) = e.cells();
    m.partner(a).map(|w| w == b).or_else(|| m.partner(b).map(|w| w == a))
}

/// Greedy vertex cover of `edges`: the node covering most uncovered edges,
/// smaller coordinate on ties.
pub fn query_cover(edges: &[Domino]) -> Vec<GridCoord> {
    let mut left: Vec<Domino> = edges.to_vec();
    let mut cover = Vec::new();
    while !left.is_empty() {
        let mut counts = std::collections::BTreeMap::<GridCoord, usize>::new();
        for e in &left {
            let (a, b) = e.cells();
            *counts.entry(a).or_default() += 1;
            *counts.entry(b).or_default() += 1;
        }
        let best = counts.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))).map(|(v, _)| *v).expect("nonempty");
        cover.push(best);
        left.retain(|e| !e.contains(best));
    }
    cover
}

/// Queries the nodes of `cover` in order, skipping determined ones, over all
/// consistent answers; each leaf is labelled by `label` of the answers.
pub fn query_all(
    cover: &[GridCoord],
    n: i32,
    acc: &PartialMatching,
    label: &mut dyn FnMut(&PartialMatching) -> bool,
) -> MatchQueryTree {
    let Some(pos) = cover.iter().position(|v| !acc.is_matched(*v)) else {
        return DecisionTree::Leaf(label(acc));
    };
    let v = cover[pos];
    let children = consistent_answers(v, acc, n)
        .into_iter()
        .map(|w| {
            let next = acc.with(v, w).expect("free neighbours");
            (w, query_all(&cover[pos + 1..], n, &next, label))
        })
        .collect();
    DecisionTree::Query { query: v, children }
}

/// The depth-1 tree for `x_e`: ask the smaller endpoint.
pub fn natural_tree(e: Domino, n: i32) -> MatchQueryTree {
    let (a, b) = e.cells();
    query_all(&[a], n, &PartialMatching::new(), &mut |m| m.partner(a) == Some(b))
}
