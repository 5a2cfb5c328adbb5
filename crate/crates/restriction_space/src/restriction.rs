use crate::bijection::{choose_path, Direction};
use crate::params::Profile;
use crate::system::{MiniId, PairId, PathSystem, SuperId};
use crate::tau::{sample_tau, TauAssignment, TauMode};
use crate::RestrictionError;
use grid_core::Domino;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Two advice bits per pair of mini-squares in adjacent super-squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdviceString(pub Vec<[bool; 2]>);

impl AdviceString {
    pub fn random<G: Rng + ?Sized>(sys: &PathSystem, rng: &mut G) -> Self {
        AdviceString((0..sys.num_pairs()).map(|_| [rng.gen(), rng.gen()]).collect())
    }

    pub fn zeros(sys: &PathSystem) -> Self {
        AdviceString(vec![[false; 2]; sys.num_pairs()])
    }

    pub fn get(&self, p: PairId) -> [bool; 2] {
        self.0[p]
    }

    pub fn to_bit_string(&self) -> String {
        self.0.iter().flat_map(|b| b.map(|x| if x { '1' } else { '0' })).collect()
    }
}

/// One mini-square per super-square, the survivor in the top-left one.
pub fn sample_u<G: Rng + ?Sized>(sys: &PathSystem, rng: &mut G) -> Vec<MiniId> {
    (0..sys.num_supers())
        .map(|s| if s == 0 { sys.survivor() } else { s * sys.delta + rng.gen_range(0..sys.delta) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenPath {
    /// Edge of the reduced grid this path stands for.
    pub edge: Domino,
    pub pair: PairId,
    pub index: usize,
    /// Lowered by `π₁` rather than picked for raising.
    pub pi1: bool,
}

/// A full restriction `σ`. All chosen paths have type 0 in `y`; setting the
/// variable of one chosen path raises it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullRestriction {
    pub tau: TauAssignment,
    /// Indexed by super-square, row-major.
    pub u: Vec<MiniId>,
    pub pi1: Vec<(SuperId, SuperId)>,
    pub advice: AdviceString,
    pub chosen: Vec<ChosenPath>,
    pub y: Vec<bool>,
}

impl FullRestriction {
    pub fn u_of(&self, sys: &PathSystem, s: SuperId) -> MiniId {
        self.u[sys.super_index(s)]
    }

    pub fn chosen_for(&self, e: Domino) -> Option<&ChosenPath> {
        self.chosen.iter().find(|c| c.edge == e)
    }
}

/// `τ`, then `U` and the `π₁` lowerings, then one path to raise between
/// every other pair of adjacent survivors.
pub fn sample_sigma<G: Rng + ?Sized>(
    sys: &PathSystem,
    restart_cap: usize,
    mode: TauMode,
    rng: &mut G,
) -> Result<FullRestriction, RestrictionError> {
    let tau = sample_tau(sys, restart_cap, mode, rng)?;
    let u = sample_u(sys, rng);
    let advice = AdviceString::random(sys, rng);
    let pi1 = sys.pi1();
    let mut y = tau.bits.clone();
    let mut chosen = Vec::new();
    let pi1_set: BTreeSet<(SuperId, SuperId)> = pi1.iter().copied().collect();
    for i in 0..sys.m {
        for j in 0..sys.m {
            let s = (i, j);
            for t in [(i, j + 1), (i + 1, j)] {
                if t.0 >= sys.m || t.1 >= sys.m {
                    continue;
                }
                let (a, b) = (u[sys.super_index(s)], u[sys.super_index(t)]);
                let p = sys.pair_between(a, b).expect("adjacent supers");
                let is_pi1 = pi1_set.contains(&(s, t));
                let dir = if is_pi1 { Direction::Lower } else { Direction::Raise };
                let index = choose_path(tau.group(p), dir, advice.get(p))?;
                y[sys.var_path(p, index)] = false;
                chosen.push(ChosenPath { edge: sys.reduced_edge(s, t), pair: p, index, pi1: is_pi1 });
            }
        }
    }
    Ok(FullRestriction { tau, u, pi1, advice, chosen, y })
}

/// The data a partial restriction `ρ` is determined by.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadruple {
    pub tau: TauAssignment,
    /// Chosen mini-square of each super-square; `None` leaves a hole.
    pub u: Vec<Option<MiniId>>,
    /// Sorted; each pair is `(a, b)` as in [`PathSystem::pair`].
    pub pi2: Vec<(MiniId, MiniId)>,
    pub advice: AdviceString,
}

/// What `ρ` fixes: path types after the lowerings, and the live set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub y: Vec<bool>,
    /// Path lowered in each `π₁` or `π₂` pair.
    pub lowered: BTreeMap<PairId, usize>,
    pub pi1_pairs: Vec<(MiniId, MiniId)>,
    pub live: BTreeSet<MiniId>,
}

impl Quadruple {
    pub fn derive(&self, sys: &PathSystem) -> Result<Derived, RestrictionError> {
        let mut y = self.tau.bits.clone();
        let mut lowered = BTreeMap::new();
        let mut pi1_pairs = Vec::new();
        for (s, t) in sys.pi1() {
            if let (Some(a), Some(b)) = (self.u[sys.super_index(s)], self.u[sys.super_index(t)]) {
                pi1_pairs.push((a, b));
            }
        }
        for &(a, b) in pi1_pairs.iter().chain(&self.pi2) {
            let p = sys.pair_between(a, b).ok_or_else(|| RestrictionError::Params(format!("minis {a} and {b} are not adjacent")))?;
            let idx = choose_path(self.tau.group(p), Direction::Lower, self.advice.get(p))?;
            y[sys.var_path(p, idx)] = false;
            lowered.insert(p, idx);
        }
        let live = self.u.iter().flatten().copied().chain(self.pi2.iter().flat_map(|&(a, b)| [a, b])).collect();
        Ok(Derived { y, lowered, pi1_pairs, live })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialOptions {
    /// Number of `π₂` pairs; defaults to `C m² ln n`.
    pub k: Option<usize>,
    pub c: f64,
    pub n: i32,
    pub restart_cap: usize,
    pub profile: Profile,
    pub tau: TauMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialRestriction {
    pub quad: Quadruple,
    pub derived: Derived,
    pub k: usize,
    /// `k` was requested but no admissible pair exists.
    pub k_forced_zero: bool,
    pub restarts: usize,
}

fn pi2_balance_violation(sys: &PathSystem, pi2: &[(MiniId, MiniId)], k: usize) -> Option<String> {
    let lambda = k as f64 / sys.num_supers() as f64;
    let mut per_super = vec![0usize; sys.num_supers()];
    let mut per_pair: BTreeMap<(SuperId, SuperId), usize> = BTreeMap::new();
    for &(a, b) in pi2 {
        per_super[sys.super_index(sys.super_of(a))] += 1;
        per_super[sys.super_index(sys.super_of(b))] += 1;
        *per_pair.entry((sys.super_of(a), sys.super_of(b))).or_default() += 1;
    }
    if let Some(s) = per_super.iter().position(|&c| c as f64 > 4.0 * lambda) {
        return Some(format!("super-square {s} holds {} π₂ minis", per_super[s]));
    }
    for i in 0..sys.m {
        for j in 0..sys.m {
            for t in [(i, j + 1), (i + 1, j)] {
                if t.0 < sys.m && t.1 < sys.m {
                    let c = per_pair.get(&((i, j), t)).copied().unwrap_or(0);
                    if (c as f64) < lambda / 4.0 {
                        return Some(format!("supers {:?} and {t:?} share {c} π₂ pairs", (i, j)));
                    }
                }
            }
        }
    }
    None
}

/// Samples `ρ`: `τ`, `U`, then `k` pairs of mini-squares in adjacent
/// super-squares, each uniform over the pairs disjoint from everything
/// picked so far. The standard profile restarts on unbalanced picks.
pub fn sample_partial_on<G: Rng + ?Sized>(sys: &PathSystem, opts: &PartialOptions, rng: &mut G) -> Result<PartialRestriction, RestrictionError> {
    let mut k = opts.k.unwrap_or_else(|| {
        let m = sys.m as f64;
        (opts.c * m * m * (opts.n as f64).ln()).round() as usize
    });
    let mut restarts = 0;
    let mut k_forced_zero = false;
    loop {
        let tau = sample_tau(sys, opts.restart_cap, opts.tau, rng)?;
        let u = sample_u(sys, rng);
        let used: BTreeSet<MiniId> = u.iter().copied().collect();
        let mut admissible: Vec<PairId> =
            (0..sys.num_pairs()).filter(|&p| !used.contains(&sys.pair(p).a) && !used.contains(&sys.pair(p).b)).collect();
        if admissible.is_empty() && k > 0 {
            k = 0;
            k_forced_zero = true;
        }
        let mut pi2 = Vec::with_capacity(k);
        let mut failure = None;
        for _ in 0..k {
            if admissible.is_empty() {
                failure = Some(format!("no admissible pair left after {} picks", pi2.len()));
                break;
            }
            let p = admissible[rng.gen_range(0..admissible.len())];
            let mp = sys.pair(p);
            pi2.push((mp.a, mp.b));
            admissible.retain(|&q| {
                let o = sys.pair(q);
                o.a != mp.a && o.a != mp.b && o.b != mp.a && o.b != mp.b
            });
        }
        if failure.is_none() && opts.profile == Profile::Standard {
            failure = pi2_balance_violation(sys, &pi2, k);
        }
        if let Some(reason) = failure {
            restarts += 1;
            if restarts > opts.restart_cap {
                return Err(RestrictionError::RestartCap { stage: "pi2", restarts: restarts - 1, reason });
            }
            continue;
        }
        pi2.sort_unstable();
        let quad = Quadruple { tau, u: u.into_iter().map(Some).collect(), pi2, advice: AdviceString::random(sys, rng) };
        let derived = quad.derive(sys)?;
        return Ok(PartialRestriction { quad, derived, k, k_forced_zero, restarts });
    }
}

/// [`sample_partial_on`] with the layout's constants; `k` overrides the
/// default `C m² ln n`.
pub fn sample_partial_restriction<G: Rng + ?Sized>(
    layout: &crate::Layout,
    rng: &mut G,
    k: Option<usize>,
) -> Result<PartialRestriction, RestrictionError> {
    let p = &layout.params;
    let opts = PartialOptions { k, c: p.c, n: p.n, restart_cap: p.restart_cap, profile: p.profile, tau: p.tau_mode() };
    sample_partial_on(&layout.system, &opts, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_shape() {
        let sys = PathSystem::new(3, 2, 2);
        let s = sample_sigma(&sys, 1000, TauMode::Restart, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(s.chosen.len(), 12);
        assert_eq!(s.chosen.iter().filter(|c| c.pi1).count(), 4);
        for c in &s.chosen {
            let before = s.tau.group(c.pair)[c.index];
            assert_eq!(before, c.pi1);
            assert!(!s.y[sys.var_path(c.pair, c.index)]);
        }
    }

    #[test]
    fn toy_partial() {
        let sys = PathSystem::new(5, 2, 2);
        let opts = PartialOptions { k: Some(4), c: 1.0, n: 6001, restart_cap: 100, profile: Profile::Toy, tau: TauMode::Conditioned };
        let rho = sample_partial_on(&sys, &opts, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(rho.quad.pi2.len(), 4);
        let minis: BTreeSet<MiniId> = rho.quad.pi2.iter().flat_map(|&(a, b)| [a, b]).collect();
        assert_eq!(minis.len(), 8);
        assert_eq!(rho.derived.lowered.len(), rho.derived.pi1_pairs.len() + 4);
        let one = PathSystem::new(3, 1, 1);
        let rho = sample_partial_on(&one, &opts, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(rho.k_forced_zero && rho.quad.pi2.is_empty());
    }
}
