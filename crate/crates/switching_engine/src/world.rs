use crate::{DecisionTree, SwitchingError};
use restriction_space::{choose_path_mask, Direction, MiniId, PairId, PartialRestriction, PathSystem, SuperId};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A question about the local configuration of one mini-square. Its answer
/// is a salted hash of the types of all paths attached to the mini-square,
/// reduced to `arity` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Probe {
    pub mini: MiniId,
    pub salt: u64,
    pub arity: u8,
}

impl Probe {
    pub fn answer(&self, config: u64) -> u8 {
        (splitmix64(config ^ self.salt) % self.arity as u64) as u8
    }
}

/// A decision tree over probes; the parts of a DNF.
pub type PartTree = DecisionTree<Probe, u8>;

/// Hash of the attached path types of `s` under `y`, with path `raise`
/// switched to 1.
pub fn config_hash(sys: &PathSystem, y: &[bool], s: MiniId, raise: Option<(PairId, usize)>) -> u64 {
    let mut h = splitmix64(s as u64);
    for &p in sys.incident(s) {
        let mut mask = 0u64;
        for i in 0..sys.group_size() {
            if y[sys.var_path(p, i)] {
                mask |= 1 << i;
            }
        }
        if let Some((q, idx)) = raise {
            if q == p {
                mask |= 1 << idx;
            }
        }
        h = splitmix64(h ^ (p as u64).rotate_left(32) ^ mask);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Pi2,
    Chosen,
}

/// Two mini-squares matched through path `path` of their pair; `a` is the
/// one the pair was discovered from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchedPair {
    pub a: MiniId,
    pub b: MiniId,
    pub pair: PairId,
    pub path: usize,
    pub provenance: Provenance,
}

impl MatchedPair {
    pub fn other(&self, s: MiniId) -> MiniId {
        if s == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn raise(&self) -> (PairId, usize) {
        (self.pair, self.path)
    }
}

/// Direction from one super-square to an adjacent one: 0 up, 1 right,
/// 2 down, 3 left.
pub fn direction(s: SuperId, t: SuperId) -> Option<u8> {
    match (t.0 as i64 - s.0 as i64, t.1 as i64 - s.1 as i64) {
        (-1, 0) => Some(0),
        (0, 1) => Some(1),
        (1, 0) => Some(2),
        (0, -1) => Some(3),
        _ => None,
    }
}

pub fn step(m: usize, s: SuperId, dir: u8) -> Option<SuperId> {
    let (i, j) = (s.0 as i64, s.1 as i64);
    let (a, b) = match dir {
        0 => (i - 1, j),
        1 => (i, j + 1),
        2 => (i + 1, j),
        3 => (i, j - 1),
        _ => return None,
    };
    (a >= 0 && b >= 0 && (a as usize) < m && (b as usize) < m).then_some((a as usize, b as usize))
}

/// The `m × m` reduced grid without the survivor's super-square. Answers
/// whether a set of super-square pairs extends to a perfect matching of
/// the rest.
#[derive(Debug)]
pub struct ReducedGrid {
    pub m: usize,
    memo: RefCell<HashMap<u128, bool>>,
}

impl ReducedGrid {
    pub fn new(m: usize) -> Result<Self, SwitchingError> {
        if m * m > 128 || m.is_multiple_of(2) {
            return Err(SwitchingError::Capacity { what: "reduced grid side", value: m as f64, limit: 11.0 });
        }
        Ok(ReducedGrid { m, memo: RefCell::new(HashMap::new()) })
    }

    fn idx(&self, s: SuperId) -> usize {
        s.0 * self.m + s.1
    }

    /// Bitmask of covered squares, or `None` when the pairs overlap or are
    /// not adjacent.
    pub fn used_mask<I: IntoIterator<Item = (SuperId, SuperId)>>(&self, pairs: I) -> Option<u128> {
        let mut used: u128 = 1;
        for (s, t) in pairs {
            direction(s, t)?;
            let bits = 1u128 << self.idx(s) | 1u128 << self.idx(t);
            if used & bits != 0 {
                return None;
            }
            used |= bits;
        }
        Some(used)
    }

    pub fn extendable<I: IntoIterator<Item = (SuperId, SuperId)>>(&self, pairs: I) -> bool {
        self.used_mask(pairs).is_some_and(|used| self.completable(used))
    }

    fn completable(&self, used: u128) -> bool {
        if let Some(&b) = self.memo.borrow().get(&used) {
            return b;
        }
        let b = self.has_perfect_matching(used);
        self.memo.borrow_mut().insert(used, b);
        b
    }

    fn free_cells(&self, used: u128) -> Vec<SuperId> {
        (0..self.m * self.m).filter(|&i| used >> i & 1 == 0).map(|i| (i / self.m, i % self.m)).collect()
    }

    fn has_perfect_matching(&self, used: u128) -> bool {
        let free = self.free_cells(used);
        let white: Vec<SuperId> = free.iter().copied().filter(|s| (s.0 + s.1) % 2 == 0).collect();
        if 2 * white.len() != free.len() {
            return false;
        }
        let mut owner: HashMap<SuperId, SuperId> = HashMap::new();
        fn augment(
            g: &ReducedGrid,
            used: u128,
            w: SuperId,
            seen: &mut Vec<SuperId>,
            owner: &mut HashMap<SuperId, SuperId>,
        ) -> bool {
            for d in 0..4 {
                let Some(b) = step(g.m, w, d) else { continue };
                if used >> g.idx(b) & 1 == 1 || seen.contains(&b) {
                    continue;
                }
                seen.push(b);
                let prev = owner.get(&b).copied();
                if prev.is_none_or(|o| augment(g, used, o, seen, owner)) {
                    owner.insert(b, w);
                    return true;
                }
            }
            false
        }
        white.iter().all(|&w| augment(self, used, w, &mut Vec::new(), &mut owner))
    }

    /// Every perfect matching of the squares left free by `fixed`, as pairs.
    pub fn completions(&self, fixed: &[(SuperId, SuperId)]) -> Vec<Vec<(SuperId, SuperId)>> {
        let Some(used) = self.used_mask(fixed.iter().copied()) else { return Vec::new() };
        let mut out = Vec::new();
        self.enumerate(used, &mut Vec::new(), &mut out);
        out
    }

    fn enumerate(&self, used: u128, acc: &mut Vec<(SuperId, SuperId)>, out: &mut Vec<Vec<(SuperId, SuperId)>>) {
        let Some(first) = (0..self.m * self.m).find(|&i| used >> i & 1 == 0) else {
            out.push(acc.clone());
            return;
        };
        if !self.completable(used) {
            return;
        }
        let s = (first / self.m, first % self.m);
        for d in 0..4 {
            let Some(t) = step(self.m, s, d) else { continue };
            if used >> self.idx(t) & 1 == 1 {
                continue;
            }
            acc.push((s, t));
            self.enumerate(used | 1 << first | 1 << self.idx(t), acc, out);
            acc.pop();
        }
    }
}

/// Pairs matched so far, keyed by both endpoints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Info {
    pairs: Vec<MatchedPair>,
    #[serde(skip)]
    by_mini: BTreeMap<MiniId, usize>,
}

impl Info {
    pub fn from_pairs<I: IntoIterator<Item = MatchedPair>>(pairs: I) -> Self {
        let mut info = Info::default();
        for p in pairs {
            info.push(p);
        }
        info
    }

    pub fn push(&mut self, p: MatchedPair) {
        debug_assert!(!self.contains(p.a) && !self.contains(p.b));
        self.by_mini.insert(p.a, self.pairs.len());
        self.by_mini.insert(p.b, self.pairs.len());
        self.pairs.push(p);
    }

    pub fn get(&self, s: MiniId) -> Option<&MatchedPair> {
        self.by_mini.get(&s).map(|&i| &self.pairs[i])
    }

    pub fn contains(&self, s: MiniId) -> bool {
        self.by_mini.contains_key(&s)
    }

    pub fn pairs(&self) -> &[MatchedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Super-square pairs of the chosen-mini pairs.
    pub fn chosen_supers(&self, sys: &PathSystem) -> Vec<(SuperId, SuperId)> {
        self.pairs.iter().filter(|p| p.provenance == Provenance::Chosen).map(|p| (sys.super_of(p.a), sys.super_of(p.b))).collect()
    }
}

/// What a partial restriction `ρ` says about every mini-square, for the
/// canonical decision process.
#[derive(Debug)]
pub struct RhoWorld<'a> {
    pub sys: &'a PathSystem,
    pub rho: &'a PartialRestriction,
    pub grid: ReducedGrid,
    live: Vec<bool>,
    chosen_in: Vec<MiniId>,
    is_chosen: Vec<bool>,
    pi2_partner: Vec<Option<MiniId>>,
}

impl<'a> RhoWorld<'a> {
    pub fn new(sys: &'a PathSystem, rho: &'a PartialRestriction) -> Result<Self, SwitchingError> {
        let mut chosen_in = Vec::with_capacity(sys.num_supers());
        let mut is_chosen = vec![false; sys.num_minis()];
        for (i, u) in rho.quad.u.iter().enumerate() {
            let u = u.ok_or(SwitchingError::Hole((i / sys.m, i % sys.m)))?;
            chosen_in.push(u);
            is_chosen[u] = true;
        }
        let mut pi2_partner = vec![None; sys.num_minis()];
        for &(a, b) in &rho.quad.pi2 {
            pi2_partner[a] = Some(b);
            pi2_partner[b] = Some(a);
        }
        let mut live = vec![false; sys.num_minis()];
        for &s in &rho.derived.live {
            live[s] = true;
        }
        Ok(RhoWorld { sys, rho, grid: ReducedGrid::new(sys.m)?, live, chosen_in, is_chosen, pi2_partner })
    }

    pub fn y(&self) -> &[bool] {
        &self.rho.derived.y
    }

    pub fn is_live(&self, s: MiniId) -> bool {
        self.live[s]
    }

    pub fn is_chosen(&self, s: MiniId) -> bool {
        self.is_chosen[s]
    }

    pub fn chosen_in(&self, s: SuperId) -> MiniId {
        self.chosen_in[self.sys.super_index(s)]
    }

    pub fn pi2_partner(&self, s: MiniId) -> Option<MiniId> {
        self.pi2_partner[s]
    }

    /// Path of the pair that becomes 1 when its two mini-squares are matched:
    /// the lowered one, or the raise choice on the current types.
    pub fn context_path(&self, p: PairId) -> Result<usize, SwitchingError> {
        if let Some(&idx) = self.rho.derived.lowered.get(&p) {
            return Ok(idx);
        }
        let state = restriction_space::to_mask(self.rho.quad.tau.group(p));
        Ok(choose_path_mask(self.sys.group_size(), state, Direction::Raise, self.rho.quad.advice.get(p))?)
    }

    pub fn matched(&self, a: MiniId, b: MiniId, provenance: Provenance) -> Result<MatchedPair, SwitchingError> {
        let pair = self.sys.pair_between(a, b).ok_or_else(|| SwitchingError::Encode(format!("minis {a} and {b} are not adjacent")))?;
        Ok(MatchedPair { a, b, pair, path: self.context_path(pair)?, provenance })
    }

    /// Configuration hash of `s` when it is determined by `ρ` and `info`.
    pub fn known(&self, s: MiniId, info: &Info) -> Option<u64> {
        if let Some(mp) = info.get(s) {
            return Some(config_hash(self.sys, self.y(), s, Some(mp.raise())));
        }
        (!self.live[s] || s == self.sys.survivor()).then(|| config_hash(self.sys, self.y(), s, None))
    }

    pub fn hash_with(&self, s: MiniId, mp: &MatchedPair) -> u64 {
        config_hash(self.sys, self.y(), s, Some(mp.raise()))
    }

    /// A live mini-square `ρ` leaves open.
    pub fn is_fresh(&self, s: MiniId, info: &Info) -> bool {
        self.live[s] && s != self.sys.survivor() && !info.contains(s)
    }

    /// Chosen mini-squares next to chosen `s` that could still be its partner.
    pub fn partner_candidates(&self, s: MiniId, info: &Info) -> Vec<MiniId> {
        let mut out: Vec<MiniId> = self
            .sys
            .super_neighbors(self.sys.super_of(s))
            .into_iter()
            .map(|t| self.chosen_in(t))
            .filter(|&t| self.is_fresh(t, info))
            .collect();
        out.sort_unstable();
        out
    }

    /// Configuration hash of `s` under a completion: a perfect matching of
    /// the reduced grid without the survivor, as super-square pairs.
    pub fn completion_hash(&self, s: MiniId, completion: &BTreeMap<SuperId, SuperId>) -> u64 {
        let partner = if !self.live[s] || s == self.sys.survivor() {
            None
        } else if let Some(t) = self.pi2_partner[s] {
            Some(t)
        } else {
            completion.get(&self.sys.super_of(s)).map(|&t| self.chosen_in(t))
        };
        match partner {
            Some(t) => {
                let mp = self.matched(s, t, Provenance::Chosen).expect("adjacent partners");
                self.hash_with(s, &mp)
            }
            None => config_hash(self.sys, self.y(), s, None),
        }
    }
}
