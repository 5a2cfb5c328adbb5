use crate::{Formula, FormulaError, Var};
use grid_core::{Domino, GridCoord};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// `x_r1_c1_r2_c2` with the smaller endpoint first.
pub fn edge_name(e: Domino) -> String {
    let (a, b) = e.cells();
    format!("x_{}_{}_{}_{}", a.row, a.col, b.row, b.col)
}

/// Inverse of [`edge_name`] for adjacent cells.
pub fn parse_edge_name(name: &str) -> Option<Domino> {
    let rest = name.strip_prefix("x_")?;
    let v: Vec<i32> = rest.split('_').map(|x| x.parse().ok()).collect::<Option<_>>()?;
    let [r1, c1, r2, c2] = v[..] else { return None };
    let (a, b) = (GridCoord::new(r1, c1), GridCoord::new(r2, c2));
    let e = Domino::new(a, b);
    (e.is_adjacent() && e.cells() == (a, b)).then_some(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhpNode {
    pub node: GridCoord,
    /// Incident edges, in the order up, right, down, left.
    pub edges: Vec<Domino>,
}

/// The perfect-matching principle on the odd `n × n` grid: every node is
/// covered by exactly one of its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PHPInstance {
    pub n: i32,
    nodes: Vec<PhpNode>,
    names: BTreeMap<Domino, Var>,
}

pub fn generate_php(n: i32) -> Result<PHPInstance, FormulaError> {
    if n < 1 || n % 2 == 0 {
        return Err(FormulaError::BadSide(n));
    }
    let mut nodes = Vec::with_capacity((n * n) as usize);
    let mut names = BTreeMap::new();
    for r in 1..=n {
        for c in 1..=n {
            let v = GridCoord::new(r, c);
            let edges: Vec<Domino> =
                v.neighbors().into_iter().filter(|w| w.in_grid(n)).map(|w| Domino::new(v, w)).collect();
            for &e in &edges {
                names.entry(e).or_insert_with(|| Var::from(edge_name(e)));
            }
            nodes.push(PhpNode { node: v, edges });
        }
    }
    Ok(PHPInstance { n, nodes, names })
}

impl PHPInstance {
    pub fn nodes(&self) -> &[PhpNode] {
        &self.nodes
    }

    pub fn node(&self, v: GridCoord) -> Option<&PhpNode> {
        v.in_grid(self.n).then(|| &self.nodes[((v.row - 1) * self.n + v.col - 1) as usize])
    }

    pub fn num_variables(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Domino> + '_ {
        self.names.keys().copied()
    }

    pub fn variable(&self, e: Domino) -> Option<&Var> {
        self.names.get(&e)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Var> + '_ {
        self.names.values()
    }

    /// Same instance with edge variables renamed by `f`.
    pub fn renamed(&self, mut f: impl FnMut(Domino) -> String) -> PHPInstance {
        let names = self.names.keys().map(|&e| (e, Arc::from(f(e)))).collect();
        PHPInstance { n: self.n, nodes: self.nodes.clone(), names }
    }

    fn var_of(&self, e: Domino) -> Formula {
        Formula::Var(self.names[&e].clone())
    }

    pub fn at_least_one(&self, node: &PhpNode) -> Formula {
        Formula::disjunction(node.edges.iter().map(|&e| self.var_of(e)))
    }

    pub fn at_most_one(&self, node: &PhpNode) -> Vec<Formula> {
        let mut out = Vec::new();
        for (i, &e) in node.edges.iter().enumerate() {
            for &f in &node.edges[i + 1..] {
                out.push(Formula::or(Formula::not(self.var_of(e)), Formula::not(self.var_of(f))));
            }
        }
        out
    }

    pub fn node_axioms(&self, node: &PhpNode) -> Vec<Formula> {
        let mut out = vec![self.at_least_one(node)];
        out.extend(self.at_most_one(node));
        out
    }

    pub fn axioms(&self) -> Vec<Formula> {
        self.nodes.iter().flat_map(|v| self.node_axioms(v)).collect()
    }

    pub fn axiom_set(&self) -> BTreeSet<Formula> {
        self.axioms().into_iter().collect()
    }

    /// Structural check: odd side, each node lists exactly its in-grid
    /// neighbours, and edge variables are named injectively.
    pub fn validate(&self) -> Result<(), FormulaError> {
        let bad = |m: String| Err(FormulaError::Instance(m));
        if self.n < 1 || self.n % 2 == 0 {
            return bad(format!("side {}", self.n));
        }
        if self.nodes.len() != (self.n * self.n) as usize {
            return bad(format!("{} nodes", self.nodes.len()));
        }
        let mut seen = BTreeSet::new();
        for node in &self.nodes {
            let expect: Vec<Domino> = node
                .node
                .neighbors()
                .into_iter()
                .filter(|w| w.in_grid(self.n))
                .map(|w| Domino::new(node.node, w))
                .collect();
            if node.edges != expect {
                return bad(format!("edges of {}", node.node));
            }
            if node.edges.iter().any(|e| !self.names.contains_key(e)) {
                return bad(format!("unnamed edge at {}", node.node));
            }
        }
        for v in self.names.values() {
            if !seen.insert(v.clone()) {
                return bad(format!("variable {v} names two edges"));
            }
        }
        if self.names.len() != (2 * self.n * (self.n - 1)) as usize {
            return bad(format!("{} variables", self.names.len()));
        }
        Ok(())
    }
}
