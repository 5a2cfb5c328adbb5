use crate::match_tree::{edge_value, natural_tree, query_all, query_cover, restrict, MatchQueryTree};
use crate::{DecisionTree, SwitchingError};
use formula_core::{parse_edge_name, FregeProof, Formula, PHPInstance, Rule};
use grid_core::{Domino, GridCoord};
use matching_engine::PartialMatching;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A map from formulas to match-query trees on the `n × n` grid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TEvaluation {
    pub n: i32,
    pub map: BTreeMap<Formula, MatchQueryTree>,
}

fn edges_of(f: &Formula) -> Result<Vec<Domino>, SwitchingError> {
    let edges: BTreeSet<Domino> = f
        .variables()
        .iter()
        .map(|v| parse_edge_name(v).ok_or_else(|| SwitchingError::Variable(v.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(edges.into_iter().collect())
}

/// Value of `f` once every variable is determined by `m`.
fn value_under(f: &Formula, m: &PartialMatching) -> Option<bool> {
    let mut assignment = BTreeMap::new();
    for v in f.variables() {
        let e = parse_edge_name(&v)?;
        assignment.insert(v, edge_value(e, m)?);
    }
    f.eval(&assignment)
}

impl TEvaluation {
    pub fn new(n: i32) -> Self {
        TEvaluation { n, map: BTreeMap::new() }
    }

    /// Largest tree depth.
    pub fn t(&self) -> usize {
        self.map.values().map(|t| t.depth()).max().unwrap_or(0)
    }

    pub fn get(&self, f: &Formula) -> Option<&MatchQueryTree> {
        self.map.get(f)
    }

    /// Trees for `formulas` and all their sub-formulas that query a greedy
    /// vertex cover of the formula's edges and read the value off each leaf.
    /// Variables get their natural tree this way.
    pub fn exhaustive<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I, n: i32) -> Result<Self, SwitchingError> {
        let mut ev = TEvaluation::new(n);
        for f in formulas {
            for g in f.subformulas() {
                if ev.map.contains_key(&g) {
                    continue;
                }
                let tree = match &g {
                    Formula::Const(b) => DecisionTree::Leaf(*b),
                    _ => {
                        let cover = query_cover(&edges_of(&g)?);
                        query_all(&cover, n, &PartialMatching::new(), &mut |m| {
                            value_under(&g, m).expect("cover determines every variable")
                        })
                    }
                };
                ev.map.insert(g, tree);
            }
        }
        Ok(ev)
    }
}

/// A broken property of a t-evaluation. Property 0 marks a sub-formula
/// missing from the domain; 1 to 5 are constants, axioms, variables,
/// negations and disjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub formula: Formula,
    pub property: u8,
    pub branch: Vec<(GridCoord, GridCoord)>,
    pub detail: String,
    /// First proof line containing the formula, when auditing.
    pub line: Option<usize>,
}

fn is_axiom(instance: &PHPInstance, f: &Formula) -> bool {
    let Ok(edges) = edges_of(f) else { return false };
    let nodes: BTreeSet<GridCoord> = edges.iter().flat_map(|e| [e.cells().0, e.cells().1]).collect();
    nodes.iter().filter_map(|&v| instance.node(v)).any(|node| instance.node_axioms(node).contains(f))
}

fn as_matching(branch: &[(GridCoord, GridCoord)]) -> Option<PartialMatching> {
    let mut m = PartialMatching::new();
    for &(a, b) in branch {
        if m.partner(a) != Some(b) {
            m.insert(a, b).ok()?;
        }
    }
    Some(m)
}

/// Checks the five properties of a t-evaluation against `instance`.
pub fn verify_evaluation(phi: &TEvaluation, instance: &PHPInstance) -> Vec<Violation> {
    let n = phi.n;
    let mut out = Vec::new();
    let mut report = |formula: &Formula, property: u8, branch: Vec<(GridCoord, GridCoord)>, detail: String| {
        out.push(Violation { formula: formula.clone(), property, branch, detail, line: None });
    };
    for (f, tree) in &phi.map {
        let children: Vec<&Formula> = match f {
            Formula::Not(a) => vec![a],
            Formula::Or(a, b) => vec![a, b],
            _ => vec![],
        };
        for c in &children {
            if !phi.map.contains_key(*c) {
                report(f, 0, vec![], format!("sub-formula {c} has no tree"));
            }
        }
        if let Formula::Const(b) = f {
            if !tree.is_constant(*b) {
                report(f, 1, vec![], format!("constant {} is not a {}-tree", u8::from(*b), u8::from(*b)));
            }
        }
        if is_axiom(instance, f) {
            if let Some((branch, _)) = tree.leaves().into_iter().find(|(_, b)| !b) {
                report(f, 2, branch, "axiom tree has a 0-leaf".into());
            }
        }
        match f {
            Formula::Var(v) => match parse_edge_name(v) {
                Some(e) if *tree == natural_tree(e, n) => {}
                Some(_) => report(f, 3, vec![], "not the natural tree".into()),
                None => report(f, 3, vec![], "variable is not a grid edge".into()),
            },
            Formula::Not(a) => {
                if let Some(ta) = phi.map.get(&**a) {
                    if *tree != ta.negated() {
                        report(f, 4, vec![], "not the negated tree of its argument".into());
                    }
                }
            }
            Formula::Or(a, b) => {
                let (Some(ta), Some(tb)) = (phi.map.get(&**a), phi.map.get(&**b)) else { continue };
                for (branch, label) in tree.leaves() {
                    let Some(sigma) = as_matching(&branch) else {
                        report(f, 5, branch, "branch is not a matching".into());
                        continue;
                    };
                    let (ra, rb) = (restrict(ta, &sigma, n), restrict(tb, &sigma, n));
                    let ok = if label { ra.is_constant(true) || rb.is_constant(true) } else { ra.is_constant(false) && rb.is_constant(false) };
                    if !ok {
                        report(f, 5, branch, format!("{}-leaf not supported by the disjuncts", u8::from(label)));
                    }
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineFailure {
    pub line: usize,
    pub rule: Rule,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub lines: usize,
    pub violations: Vec<Violation>,
    /// First line whose tree is not a 1-tree.
    pub first_failure: Option<LineFailure>,
}

impl AuditReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.first_failure.is_none()
    }

    pub fn properties(&self) -> BTreeSet<u8> {
        self.violations.iter().map(|v| v.property).collect()
    }
}

/// Verifies `phi` on the formulas of `proof` and checks that every line is
/// mapped to a 1-tree. Needs `t ≤ n/150`.
pub fn audit_proof(proof: &FregeProof, phi: &TEvaluation, instance: &PHPInstance, t: usize) -> Result<AuditReport, SwitchingError> {
    let limit = phi.n as f64 / 150.0;
    if t as f64 > limit {
        return Err(SwitchingError::Capacity { what: "evaluation depth t", value: t as f64, limit });
    }
    if phi.t() > t {
        return Err(SwitchingError::Capacity { what: "tree depth", value: phi.t() as f64, limit: t as f64 });
    }
    let subs: Vec<BTreeSet<Formula>> = proof.lines.iter().map(|l| l.formula.subformulas()).collect();
    let domain: BTreeSet<&Formula> = subs.iter().flatten().collect();
    let local = TEvaluation {
        n: phi.n,
        map: phi.map.iter().filter(|(f, _)| domain.contains(f)).map(|(f, t)| (f.clone(), t.clone())).collect(),
    };
    let mut violations = verify_evaluation(&local, instance);
    for f in domain.iter().filter(|f| !local.map.contains_key(**f)) {
        violations.push(Violation { formula: (*f).clone(), property: 0, branch: vec![], detail: "no tree".into(), line: None });
    }
    for v in &mut violations {
        v.line = subs.iter().position(|s| s.contains(&v.formula)).map(|i| i + 1);
    }
    violations.sort_by_key(|v| (v.line, v.property));
    let first_failure = proof.lines.iter().enumerate().find_map(|(i, l)| {
        let ok = local.map.get(&l.formula).is_some_and(|t| t.is_constant(true));
        (!ok).then(|| LineFailure { line: i + 1, rule: l.rule, formula: l.formula.clone() })
    });
    Ok(AuditReport { lines: proof.lines.len(), violations, first_failure })
}
