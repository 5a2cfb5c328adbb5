use serde::{Deserialize, Serialize};

/// A decision tree whose internal nodes ask `Q` and branch on answers `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionTree<Q, A> {
    Leaf(bool),
    Query { query: Q, children: Vec<(A, DecisionTree<Q, A>)> },
}

impl<Q: Clone, A: Clone + PartialEq> DecisionTree<Q, A> {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { children, .. } => 1 + children.iter().map(|(_, c)| c.depth()).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Query { children, .. } => 1 + children.iter().map(|(_, c)| c.node_count()).sum::<usize>(),
        }
    }

    /// Every leaf with the answers leading to it, depth first.
    pub fn leaves(&self) -> Vec<(Vec<(Q, A)>, bool)> {
        fn walk<Q: Clone, A: Clone>(t: &DecisionTree<Q, A>, path: &mut Vec<(Q, A)>, out: &mut Vec<(Vec<(Q, A)>, bool)>) {
            match t {
                DecisionTree::Leaf(b) => out.push((path.clone(), *b)),
                DecisionTree::Query { query, children } => {
                    for (a, c) in children {
                        path.push((query.clone(), a.clone()));
                        walk(c, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Answer paths to the 1-leaves, depth first.
    pub fn one_branches(&self) -> Vec<Vec<(Q, A)>> {
        self.leaves().into_iter().filter(|(_, b)| *b).map(|(p, _)| p).collect()
    }

    /// All leaves carry `b`. A tree with no leaves qualifies vacuously.
    pub fn is_constant(&self, b: bool) -> bool {
        match self {
            DecisionTree::Leaf(x) => *x == b,
            DecisionTree::Query { children, .. } => children.iter().all(|(_, c)| c.is_constant(b)),
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            DecisionTree::Leaf(b) => DecisionTree::Leaf(!b),
            DecisionTree::Query { query, children } => DecisionTree::Query {
                query: query.clone(),
                children: children.iter().map(|(a, c)| (a.clone(), c.negated())).collect(),
            },
        }
    }

    /// Follows `answer` at every query; `None` when an answer has no child.
    pub fn evaluate(&self, mut answer: impl FnMut(&Q) -> A) -> Option<bool> {
        let mut t = self;
        loop {
            match t {
                DecisionTree::Leaf(b) => return Some(*b),
                DecisionTree::Query { query, children } => {
                    let a = answer(query);
                    t = &children.iter().find(|(x, _)| *x == a)?.1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = DecisionTree<u8, u8>;

    fn sample() -> T {
        T::Query {
            query: 0,
            children: vec![(0, T::Leaf(true)), (1, T::Query { query: 1, children: vec![(0, T::Leaf(false)), (1, T::Leaf(true))] })],
        }
    }

    #[test]
    fn shape() {
        let t = sample();
        assert_eq!((t.depth(), t.node_count()), (2, 5));
        assert_eq!(t.one_branches(), vec![vec![(0, 0)], vec![(0, 1), (1, 1)]]);
        assert!(!t.is_constant(true));
        assert_eq!(t.negated().negated(), t);
        assert_eq!(t.evaluate(|&q| q), Some(true));
        assert_eq!(t.evaluate(|_| 1), Some(true));
        assert_eq!(t.evaluate(|_| 2), None);
    }
}
