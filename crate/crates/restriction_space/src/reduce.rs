use crate::assemble::{brick_dents, local_matching, mini_dents, Assembly, LocalMatching};
use crate::layout::{BrickId, Layout, Region};
use crate::restriction::{sample_sigma, FullRestriction};
use crate::system::MiniId;
use crate::RestrictionError;
use formula_core::{apply_with, edge_name, entails, generate_php, Formula, Literal, PHPInstance, Replacement, SubstitutionMap, Var};
use grid_core::{Domino, GridCoord};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

/// Name of the reduced variable for a reduced-grid edge.
pub fn z_name(e: Domino) -> String {
    format!("z{}", &edge_name(e)[1..])
}

/// Compact replacement: `z` variables by index into [`Substitution::z_names`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rep {
    Const(bool),
    Lit(usize, bool),
    Or(Vec<usize>),
}

/// The substitution of a full restriction, evaluated edge by edge.
#[derive(Debug, Clone)]
pub struct Substitution {
    pub z_names: Vec<Var>,
    pub z_edges: Vec<Domino>,
    base: Assembly,
    /// Variable of every chosen layout path.
    chosen_path: HashMap<usize, usize>,
    /// Bricks on a chosen path: the variable and the matching with it raised.
    raised_bricks: HashMap<BrickId, (usize, Arc<LocalMatching>)>,
    /// For each live mini-square, one matching per incident chosen path.
    u_variants: HashMap<MiniId, Vec<(usize, Arc<LocalMatching>)>>,
}

impl Substitution {
    pub fn new(layout: &Layout, sigma: &FullRestriction) -> Result<Substitution, RestrictionError> {
        let sys = &layout.system;
        let skip: BTreeSet<MiniId> = sigma.u.iter().copied().collect();
        let y = crate::assemble::path_types(layout, &sigma.y);
        let base = Assembly::new(layout, y.clone(), &skip)?;
        let z_edges: Vec<Domino> = sigma.chosen.iter().map(|c| c.edge).collect();
        let z_names = z_edges.iter().map(|&e| Var::from(z_name(e))).collect();
        let mut chosen_path = HashMap::new();
        let mut raised_bricks = HashMap::new();
        let mut u_variants: HashMap<MiniId, Vec<(usize, Arc<LocalMatching>)>> = HashMap::new();
        for (zi, c) in sigma.chosen.iter().enumerate() {
            let pid = layout.path_index(c.pair, crate::PathKind::Variable(c.index));
            chosen_path.insert(pid, zi);
            let mut raised = y.clone();
            raised[pid] = true;
            for s in &layout.paths[pid].steps {
                let m = local_matching(layout.params.brick, &brick_dents(layout, s.brick, &raised))?;
                if raised_bricks.insert(s.brick, (zi, m)).is_some() {
                    return Err(RestrictionError::Assembly(format!("brick {:?} lies on two chosen paths", s.brick)));
                }
            }
            let pair = sys.pair(c.pair);
            for mini in [pair.a, pair.b] {
                let m = local_matching(layout.mini_side(mini), &mini_dents(layout, mini, &raised))?;
                u_variants.entry(mini).or_default().push((zi, m));
            }
        }
        Ok(Substitution { z_names, z_edges, base, chosen_path, raised_bricks, u_variants })
    }

    pub fn rep(&self, layout: &Layout, a: GridCoord, b: GridCoord) -> Rep {
        match (layout.locate(a), layout.locate(b)) {
            (Region::Mini(x, ar, ac), Region::Mini(y, br, bc)) if x == y => match self.u_variants.get(&x) {
                Some(vars) => {
                    let zs: Vec<usize> = vars.iter().filter(|(_, m)| m.joins((ar, ac), (br, bc))).map(|&(z, _)| z).collect();
                    match zs.len() {
                        0 => Rep::Const(false),
                        l if l == vars.len() => Rep::Const(true),
                        1 => Rep::Lit(zs[0], true),
                        _ => Rep::Or(zs),
                    }
                }
                None => Rep::Const(self.base.edge_value(layout, a, b)),
            },
            (Region::Brick(p, ar, ac), Region::Brick(q, br, bc)) if p == q => {
                let lo = self.base.brick(p).joins((ar, ac), (br, bc));
                match self.raised_bricks.get(&p) {
                    Some((z, m)) => match (lo, m.joins((ar, ac), (br, bc))) {
                        (l, h) if l == h => Rep::Const(l),
                        (_, h) => Rep::Lit(*z, h),
                    },
                    None => Rep::Const(lo),
                }
            }
            (Region::Strip, Region::Strip) => Rep::Const(layout.strip_partner(a) == Some(b)),
            _ => match layout.crossing_path(Domino::new(a, b)) {
                Some(pid) => match self.chosen_path.get(&pid) {
                    Some(&z) => Rep::Lit(z, true),
                    None => Rep::Const(self.base.y[pid]),
                },
                None => Rep::Const(false),
            },
        }
    }

    pub fn rep_formula(&self, r: &Rep) -> Formula {
        self.replacement_of(r).formula()
    }

    pub fn replacement_of(&self, r: &Rep) -> Replacement {
        let lit = |z: usize, pos| Literal::new(self.z_names[z].to_string(), pos);
        match r {
            Rep::Const(b) => Replacement::Const(*b),
            Rep::Lit(z, pos) => Replacement::Lit(lit(*z, *pos)),
            Rep::Or(zs) => Replacement::Or(zs.iter().map(|&z| lit(z, true)).collect()),
        }
    }

    pub fn replacement(&self, layout: &Layout, e: Domino) -> Replacement {
        let (a, b) = e.cells();
        self.replacement_of(&self.rep(layout, a, b))
    }

    /// Every edge of the parent instance with its replacement.
    pub fn to_map(&self, layout: &Layout) -> SubstitutionMap {
        let n = layout.params.n;
        let mut out = BTreeMap::new();
        for r in 1..=n {
            for c in 1..=n {
                let v = GridCoord::new(r, c);
                for w in [GridCoord::new(r, c + 1), GridCoord::new(r + 1, c)] {
                    if w.in_grid(n) {
                        out.insert(Var::from(edge_name(Domino::new(v, w))), self.replacement_of(&self.rep(layout, v, w)));
                    }
                }
            }
        }
        out
    }

    /// Counts the replacement shapes over every edge of the parent grid.
    pub fn replacement_stats(&self, layout: &Layout) -> ReplacementStats {
        let n = layout.params.n;
        let mut stats = ReplacementStats::default();
        for r in 1..=n {
            for c in 1..=n {
                let v = GridCoord::new(r, c);
                for w in [GridCoord::new(r, c + 1), GridCoord::new(r + 1, c)] {
                    if !w.in_grid(n) {
                        continue;
                    }
                    match self.rep(layout, v, w) {
                        Rep::Const(_) => stats.constants += 1,
                        Rep::Lit(..) => stats.literals += 1,
                        Rep::Or(zs) => {
                            stats.disjunctions += 1;
                            stats.max_width = stats.max_width.max(zs.len());
                            if !self.replacement_of(&Rep::Or(zs)).is_well_formed() {
                                stats.ill_formed += 1;
                            }
                        }
                    }
                }
            }
        }
        stats
    }

    /// Images of the axioms of one parent node whose incident edges map to
    /// `reps`, classified.
    fn classify(&self, reps: &[Rep], node_vars: &[(BTreeSet<Var>, Vec<Formula>)]) -> PatternVerdict {
        let mut out = PatternVerdict::default();
        let images: Vec<Formula> = reps.iter().map(|r| self.rep_formula(r)).collect();
        let mut axioms = vec![Formula::disjunction(images.clone())];
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                axioms.push(Formula::or(Formula::not(images[i].clone()), Formula::not(images[j].clone())));
            }
        }
        for ax in axioms {
            let img = fold(&ax);
            if img == Formula::Const(true) {
                out.constant_true += 1;
                continue;
            }
            if img == Formula::Const(false) {
                out.failures.push("an axiom maps to 0".into());
                continue;
            }
            if entails(&[], &img) {
                out.tautologies += 1;
                continue;
            }
            let vars = img.variables();
            let mut ok = false;
            for (idx, (nv, node_ax)) in node_vars.iter().enumerate() {
                if vars.is_subset(nv) {
                    out.attributions.push((idx, img.clone()));
                    ok |= entails(node_ax, &img);
                }
            }
            if ok {
                out.reduced += 1;
            } else {
                out.failures.push(format!("{img} follows from no reduced node"));
            }
        }
        out
    }

    /// Applies the substitution to every axiom of the parent instance. Each
    /// image must fold to 1, be a tautology, or follow from the axioms of a
    /// single reduced node whose variables it uses; and each reduced node's
    /// axioms must in turn follow from the images attributed to it.
    pub fn check_axioms(&self, layout: &Layout, reduced: &PHPInstance) -> AxiomReport {
        let n = layout.params.n;
        let mut report = AxiomReport::default();
        let node_vars: Vec<(BTreeSet<Var>, Vec<Formula>)> = reduced
            .nodes()
            .iter()
            .map(|node| {
                let ax = reduced.node_axioms(node);
                (ax.iter().flat_map(|f| f.variables()).collect(), ax)
            })
            .collect();
        let mut attributed: Vec<BTreeSet<Formula>> = vec![BTreeSet::new(); node_vars.len()];
        let mut cache: HashMap<Vec<Rep>, PatternVerdict> = HashMap::new();
        for r in 1..=n {
            for c in 1..=n {
                let v = GridCoord::new(r, c);
                let reps: Vec<Rep> = [(-1, 0), (0, 1), (1, 0), (0, -1)]
                    .into_iter()
                    .map(|(dr, dc)| GridCoord::new(r + dr, c + dc))
                    .filter(|w| w.in_grid(n))
                    .map(|w| self.rep(layout, v, w))
                    .collect();
                let k = reps.len();
                report.parent_axioms += 1 + k * (k - 1) / 2;
                if reps.iter().all(|x| matches!(x, Rep::Const(_))) {
                    if reps.iter().filter(|x| **x == Rep::Const(true)).count() == 1 {
                        report.constant_true += 1 + k * (k - 1) / 2;
                    } else {
                        report.failures.push(format!("node {v}: constants {reps:?}"));
                    }
                    continue;
                }
                let verdict = cache.entry(reps.clone()).or_insert_with(|| {
                    let verdict = self.classify(&reps, &node_vars);
                    for (idx, img) in &verdict.attributions {
                        attributed[*idx].insert(img.clone());
                    }
                    verdict
                });
                report.constant_true += verdict.constant_true;
                report.tautologies += verdict.tautologies;
                report.reduced_images += verdict.reduced;
                report.failures.extend(verdict.failures.iter().map(|f| format!("node {v}: {f}")));
            }
        }
        for (idx, (_, ax)) in node_vars.iter().enumerate() {
            let premises: Vec<Formula> = attributed[idx].iter().cloned().collect();
            for a in ax {
                if !entails(&premises, a) {
                    report.failures.push(format!("reduced axiom {a} of node {} is not produced", reduced.nodes()[idx].node));
                }
            }
        }
        report.patterns = cache.len();
        report
    }
}

#[derive(Debug, Clone, Default)]
struct PatternVerdict {
    constant_true: usize,
    tautologies: usize,
    reduced: usize,
    failures: Vec<String>,
    attributions: Vec<(usize, Formula)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReplacementStats {
    pub constants: usize,
    pub literals: usize,
    pub disjunctions: usize,
    pub max_width: usize,
    pub ill_formed: usize,
}

impl ReplacementStats {
    pub fn is_ok(&self) -> bool {
        self.ill_formed == 0 && self.max_width <= 3
    }
}

/// Constant folding through the identity substitution.
fn fold(f: &Formula) -> Formula {
    apply_with(f, &|v: &Var| Some(Formula::Var(v.clone()))).expect("identity lookup is total")
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub parent_axioms: usize,
    pub constant_true: usize,
    pub tautologies: usize,
    pub reduced_images: usize,
    pub patterns: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty() && self.constant_true + self.tautologies + self.reduced_images == self.parent_axioms
    }
}

/// The reduced instance on the `m × m` grid, over the `z` variables.
pub fn reduced_instance(m: usize) -> Result<PHPInstance, RestrictionError> {
    Ok(generate_php(m as i32)?.renamed(z_name))
}

/// Samples `σ` and derives its substitution and reduced instance.
pub fn sample_full_restriction<G: Rng + ?Sized>(
    layout: &Layout,
    rng: &mut G,
) -> Result<(FullRestriction, Substitution, PHPInstance), RestrictionError> {
    let sigma = sample_sigma(&layout.system, layout.params.restart_cap, layout.params.tau_mode(), rng)?;
    let sub = Substitution::new(layout, &sigma)?;
    let reduced = reduced_instance(layout.system.m)?;
    reduced.validate()?;
    Ok((sigma, sub, reduced))
}
