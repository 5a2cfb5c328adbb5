use crate::canonical::{one_branches, Branch, CanonicalRun, Stage};
use crate::world::{config_hash, direction, step, Info, MatchedPair, PartTree, Provenance, ReducedGrid, RhoWorld};
use crate::SwitchingError;
use restriction_space::{
    next_state, to_mask, AdviceString, Derived, Direction, MiniId, PairId, PartialRestriction, PathSystem, Quadruple,
    SuperId, TauAssignment, ALL_ADVICE,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// `ρ*`: the restriction after the forcing pairs of a canonical run are
/// killed, plus the metadata of `ρ` that the quadruple does not carry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarQuadruple {
    pub quad: Quadruple,
    pub holes: Vec<SuperId>,
    pub k_forced_zero: bool,
    pub restarts: usize,
}

/// Varint stream of the choices the decoder cannot infer from `ρ*`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalInfo {
    pub bytes: Vec<u8>,
}

impl ExternalInfo {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn from_hex(s: &str) -> Result<Self, SwitchingError> {
        hex::decode(s).map(|bytes| ExternalInfo { bytes }).map_err(|e| SwitchingError::Decode(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Encoding {
    pub star: StarQuadruple,
    pub info: ExternalInfo,
    /// `Σ log₂ bound` over the written symbols.
    pub bits: f64,
    pub symbols: usize,
    /// Forced but inconsistent branches passed over at each stage.
    pub skips: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub rho: PartialRestriction,
    pub stages: Vec<Stage>,
    pub skips: Vec<usize>,
}

fn pair_key(sys: &PathSystem, p: PairId) -> (MiniId, MiniId) {
    let mp = sys.pair(p);
    (mp.a, mp.b)
}

fn y_with_raises(y: &[bool], sys: &PathSystem, pairs: &[MatchedPair]) -> Vec<bool> {
    let mut y = y.to_vec();
    for mp in pairs {
        y[sys.var_path(mp.pair, mp.path)] = true;
    }
    y
}

/// Pairs lowered by a quadruple: its `π₁` pairs and its `π₂` pairs.
fn lowered_pairs(sys: &PathSystem, u: &[Option<MiniId>], pi2: &BTreeSet<(MiniId, MiniId)>) -> BTreeSet<PairId> {
    let mut out = BTreeSet::new();
    for (s, t) in sys.pi1() {
        if let (Some(a), Some(b)) = (u[sys.super_index(s)], u[sys.super_index(t)]) {
            out.extend(sys.pair_between(a, b));
        }
    }
    out.extend(pi2.iter().filter_map(|&(a, b)| sys.pair_between(a, b)));
    out
}

/// Advice under which raising then lowering the group returns to `v`.
fn undoable_raise(size: usize, v: u32, prefer: [bool; 2]) -> Option<(u32, [bool; 2])> {
    std::iter::once(prefer).chain(ALL_ADVICE).find_map(|b| {
        let up = next_state(size, v, Direction::Raise, b).ok()?;
        (next_state(size, up, Direction::Lower, b).ok()? == v).then_some((up, b))
    })
}

/// Builds `ρ*` from `ρ` and the forcing pairs `J*` of `run`. Chosen pairs
/// of `J*` leave their super-squares to the first remaining `π₂` pair
/// spanning the same two super-squares, or to holes when there is none or
/// when the new lowering cannot be undone. Its path types are those of `ρ`
/// with every `J*` path raised.
pub fn build_star(world: &RhoWorld, run: &CanonicalRun) -> Result<StarQuadruple, SwitchingError> {
    let (sys, rho) = (world.sys, world.rho);
    let jstar = run.j_star();
    let y_target = y_with_raises(&rho.derived.y, sys, &jstar);
    let chosen: Vec<&MatchedPair> = jstar.iter().filter(|p| p.provenance == Provenance::Chosen).collect();
    let size = sys.group_size();
    let mut forced_holes: BTreeSet<usize> = BTreeSet::new();
    loop {
        let mut u = rho.quad.u.clone();
        let mut pi2: BTreeSet<(MiniId, MiniId)> = rho.quad.pi2.iter().copied().collect();
        for mp in jstar.iter().filter(|p| p.provenance == Provenance::Pi2) {
            pi2.remove(&pair_key(sys, mp.pair));
        }
        let mut replaced: Vec<(usize, [MiniId; 2])> = Vec::new();
        for (k, mp) in chosen.iter().enumerate() {
            let (sa, sb) = (sys.super_of(mp.a), sys.super_of(mp.b));
            u[sys.super_index(sa)] = None;
            u[sys.super_index(sb)] = None;
            if forced_holes.contains(&k) {
                continue;
            }
            let spans = |&&(c, d): &&(MiniId, MiniId)| {
                let (x, y) = (sys.super_of(c), sys.super_of(d));
                (x, y) == (sa, sb) || (x, y) == (sb, sa)
            };
            if let Some(&(c, d)) = pi2.iter().find(spans) {
                pi2.remove(&(c, d));
                u[sys.super_index(sys.super_of(c))] = Some(c);
                u[sys.super_index(sys.super_of(d))] = Some(d);
                replaced.push((k, [c, d]));
            }
        }
        let mut bits = y_target.clone();
        let mut advice = rho.quad.advice.clone();
        let mut stuck = None;
        for p in lowered_pairs(sys, &u, &pi2) {
            let range = sys.var_path(p, 0)..sys.var_path(p, 0) + size;
            if rho.derived.lowered.contains_key(&p) {
                bits[range].copy_from_slice(rho.quad.tau.group(p));
                continue;
            }
            match undoable_raise(size, to_mask(&y_target[range.clone()]), advice.get(p)) {
                Some((up, b)) => {
                    for (i, slot) in bits[range].iter_mut().enumerate() {
                        *slot = up >> i & 1 == 1;
                    }
                    advice.0[p] = b;
                }
                None => {
                    stuck = Some(p);
                    break;
                }
            }
        }
        if let Some(p) = stuck {
            let mp = sys.pair(p);
            let culprit = replaced
                .iter()
                .find(|(_, cd)| cd.iter().any(|&c| c == mp.a || c == mp.b || sys.pi1().iter().any(|&(s, t)| {
                    let sc = sys.super_of(c);
                    (s == sc && (t == sys.super_of(mp.a) || t == sys.super_of(mp.b))) || (t == sc && (s == sys.super_of(mp.a) || s == sys.super_of(mp.b)))
                })))
                .map(|(k, _)| *k)
                .or_else(|| replaced.first().map(|(k, _)| *k));
            match culprit {
                Some(k) => {
                    forced_holes.insert(k);
                    continue;
                }
                None => return Err(SwitchingError::Encode(format!("pair {p} cannot be lowered back"))),
            }
        }
        let quad = Quadruple {
            tau: TauAssignment { r: sys.r, bits, restarts: rho.quad.tau.restarts },
            u,
            pi2: pi2.into_iter().collect(),
            advice,
        };
        let derived = quad.derive(sys)?;
        if derived.y != y_target {
            return Err(SwitchingError::Encode("star path types differ from the raised types".into()));
        }
        let holes = quad.u.iter().enumerate().filter(|(_, u)| u.is_none()).map(|(i, _)| (i / sys.m, i % sys.m)).collect();
        return Ok(StarQuadruple { quad, holes, k_forced_zero: rho.k_forced_zero, restarts: rho.restarts });
    }
}

enum Channel<'a> {
    Write { out: Vec<u8>, bits: f64, symbols: usize },
    Read { data: &'a [u8], pos: usize },
}

impl Channel<'_> {
    /// Writes `truth` when encoding and reads a value when decoding; either
    /// way the value must lie below `bound`.
    fn sym(&mut self, bound: u64, truth: Option<u64>) -> Result<u64, SwitchingError> {
        match self {
            Channel::Write { out, bits, symbols } => {
                let v = truth.ok_or_else(|| SwitchingError::Encode("no value to write".into()))?;
                if v >= bound {
                    return Err(SwitchingError::Encode(format!("value {v} not below {bound}")));
                }
                let mut x = v;
                loop {
                    let byte = (x & 0x7f) as u8;
                    x >>= 7;
                    if x == 0 {
                        out.push(byte);
                        break;
                    }
                    out.push(byte | 0x80);
                }
                *bits += (bound as f64).log2();
                *symbols += 1;
                Ok(v)
            }
            Channel::Read { data, pos } => {
                let mut v = 0u64;
                let mut shift = 0;
                loop {
                    let byte = *data.get(*pos).ok_or_else(|| SwitchingError::Decode("stream ended early".into()))?;
                    *pos += 1;
                    if shift >= 64 {
                        return Err(SwitchingError::Decode("varint too long".into()));
                    }
                    v |= u64::from(byte & 0x7f) << shift;
                    shift += 7;
                    if byte & 0x80 == 0 {
                        break;
                    }
                }
                if v >= bound {
                    return Err(SwitchingError::Decode(format!("value {v} not below {bound}")));
                }
                Ok(v)
            }
        }
    }
}

/// What the encoder knows beyond `ρ*`.
struct Truth<'w, 'a> {
    world: &'w RhoWorld<'a>,
    run: &'w CanonicalRun,
    jpair: BTreeMap<MiniId, MatchedPair>,
}

struct Engine<'w, 'a> {
    sys: &'a PathSystem,
    branches: Vec<Branch>,
    star: &'w StarQuadruple,
    star_derived: Derived,
    live_star: Vec<bool>,
    grid: ReducedGrid,
    chan: Channel<'w>,
    truth: Option<Truth<'w, 'a>>,
    y: Vec<bool>,
    info: Info,
    /// Fresh mini-squares seen so far: provenance and partner direction.
    e: BTreeMap<MiniId, (Provenance, u8)>,
    stages: Vec<Stage>,
    skips: Vec<usize>,
    jstar: Vec<MatchedPair>,
}

fn decode_err(s: impl Into<String>) -> SwitchingError {
    SwitchingError::Decode(s.into())
}

impl Engine<'_, '_> {
    fn known(&self, s: MiniId) -> Option<u64> {
        if let Some(mp) = self.info.get(s) {
            return Some(config_hash(self.sys, &self.y, s, Some(mp.raise())));
        }
        (!self.live_star[s] || s == self.sys.survivor()).then(|| config_hash(self.sys, &self.y, s, None))
    }

    fn forced(&self, b: &Branch) -> bool {
        b.steps.iter().all(|(p, want)| self.known(p.mini).is_some_and(|h| p.answer(h) == *want))
    }

    fn chosen_in_star(&self, s: SuperId) -> Option<MiniId> {
        self.star.quad.u[self.sys.super_index(s)]
    }

    fn consistent(&self, b: &Branch) -> bool {
        let mut pairs: BTreeSet<(SuperId, SuperId)> = BTreeSet::new();
        for s in b.minis() {
            if let Some(&(Provenance::Chosen, dir)) = self.e.get(&s) {
                let from = self.sys.super_of(s);
                let Some(to) = step(self.sys.m, from, dir) else { return false };
                pairs.insert((from.min(to), from.max(to)));
            }
        }
        self.grid.extendable(self.info.chosen_supers(self.sys).into_iter().chain(pairs))
    }

    fn run(&mut self) -> Result<(), SwitchingError> {
        let g = self.chan.sym(self.sys.num_minis() as u64 + 1, self.truth.as_ref().map(|t| t.run.stages.len() as u64))?;
        for j in 0..g as usize {
            self.stage(j)?;
        }
        Ok(())
    }

    fn stage(&mut self, j: usize) -> Result<(), SwitchingError> {
        let mut chosen_branch = None;
        let mut skipped = 0;
        for bi in 0..self.branches.len() {
            if !self.forced(&self.branches[bi]) {
                continue;
            }
            let minis = self.branches[bi].minis();
            loop {
                let next = self.truth.as_ref().map(|t| {
                    minis.iter().position(|s| t.jpair.contains_key(s) && !self.info.contains(*s) && !self.e.contains_key(s))
                });
                let more = self.chan.sym(2, next.map(|p| p.is_some() as u64))?;
                if more == 0 {
                    break;
                }
                let pos = self.chan.sym(minis.len() as u64, next.flatten().map(|p| p as u64))? as usize;
                let s = minis[pos];
                let sig = self.truth.as_ref().map(|t| {
                    let mp = t.jpair[&s];
                    let dir = direction(self.sys.super_of(s), self.sys.super_of(mp.other(s))).expect("adjacent");
                    (u64::from(mp.provenance == Provenance::Chosen), u64::from(dir))
                });
                let kind = self.chan.sym(2, sig.map(|x| x.0))?;
                let dir = self.chan.sym(4, sig.map(|x| x.1))? as u8;
                let prov = if kind == 1 { Provenance::Chosen } else { Provenance::Pi2 };
                if self.e.insert(s, (prov, dir)).is_some() {
                    return Err(decode_err(format!("mini {s} announced twice")));
                }
            }
            if self.consistent(&self.branches[bi]) {
                chosen_branch = Some(bi);
                break;
            }
            skipped += 1;
        }
        self.skips.push(skipped);
        let bi = chosen_branch.ok_or_else(|| decode_err(format!("no branch for stage {j}")))?;
        if let Some(t) = &self.truth {
            if t.run.stages[j].branch != bi {
                return Err(SwitchingError::Encode(format!("stage {j}: star selects branch {bi}, run used {}", t.run.stages[j].branch)));
            }
        }
        let jj = self.read_j(j, bi)?;
        let ii = self.read_i(j, &jj)?;
        for mp in &jj {
            self.y[self.sys.var_path(mp.pair, mp.path)] = false;
            self.e.remove(&mp.a);
            self.e.remove(&mp.b);
        }
        for mp in &ii {
            self.info.push(*mp);
        }
        self.jstar.extend(jj.iter().copied());
        self.stages.push(Stage { branch: bi, j: jj, i: ii, followed: false });
        Ok(())
    }

    fn read_j(&mut self, j: usize, bi: usize) -> Result<Vec<MatchedPair>, SwitchingError> {
        let sys = self.sys;
        let mut out: Vec<MatchedPair> = Vec::new();
        for s in self.branches[bi].minis() {
            let Some(&(prov, dir)) = self.e.get(&s) else { continue };
            if out.iter().any(|p| p.a == s || p.b == s) {
                continue;
            }
            let truth = self.truth.as_ref().map(|t| t.jpair[&s]);
            let to = step(sys.m, sys.super_of(s), dir).ok_or_else(|| decode_err("direction leaves the grid"))?;
            let d = self.chan.sym(sys.delta as u64, truth.map(|mp| sys.diag_index(mp.other(s)) as u64))? as usize;
            let path = self.chan.sym(sys.group_size() as u64, truth.map(|mp| mp.path as u64))? as usize;
            let b = sys.mini(to, d);
            let pair = sys.pair_between(s, b).ok_or_else(|| decode_err("partner not adjacent"))?;
            out.push(MatchedPair { a: s, b, pair, path, provenance: prov });
        }
        if let Some(t) = &self.truth {
            if t.run.stages[j].j != out {
                return Err(SwitchingError::Encode(format!("stage {j}: forcing pairs differ")));
            }
        }
        Ok(out)
    }

    fn read_i(&mut self, j: usize, jj: &[MatchedPair]) -> Result<Vec<MatchedPair>, SwitchingError> {
        let sys = self.sys;
        let mut out: Vec<MatchedPair> = jj.iter().copied().filter(|p| p.provenance == Provenance::Pi2).collect();
        let queue: Vec<MiniId> = jj.iter().filter(|p| p.provenance == Provenance::Chosen).flat_map(|p| [p.a, p.b]).collect();
        for s in queue {
            if self.info.contains(s) || out.iter().any(|p| p.a == s || p.b == s) {
                continue;
            }
            let truth = self.truth.as_ref().map(|t| {
                *t.run.stages[j].i.iter().find(|p| p.a == s).expect("queried mini has an answer")
            });
            let from = sys.super_of(s);
            let dir = self.chan.sym(4, truth.map(|mp| u64::from(direction(from, sys.super_of(mp.b)).expect("adjacent"))))?;
            let path = self.chan.sym(sys.group_size() as u64, truth.map(|mp| mp.path as u64))? as usize;
            let to = step(sys.m, from, dir as u8).ok_or_else(|| decode_err("direction leaves the grid"))?;
            let b = jj
                .iter()
                .filter(|p| p.provenance == Provenance::Chosen)
                .flat_map(|p| [p.a, p.b])
                .find(|&x| sys.super_of(x) == to)
                .or_else(|| self.chosen_in_star(to))
                .ok_or_else(|| decode_err("answer points at a hole"))?;
            let pair = sys.pair_between(s, b).ok_or_else(|| decode_err("answer not adjacent"))?;
            out.push(MatchedPair { a: s, b, pair, path, provenance: Provenance::Chosen });
        }
        if let Some(t) = &self.truth {
            if t.run.stages[j].i != out {
                return Err(SwitchingError::Encode(format!("stage {j}: answers differ")));
            }
        }
        Ok(out)
    }

    fn finish(&mut self) -> Result<PartialRestriction, SwitchingError> {
        let sys = self.sys;
        let mut u = self.star.quad.u.clone();
        let mut pi2: BTreeSet<(MiniId, MiniId)> = self.star.quad.pi2.iter().copied().collect();
        for mp in &self.jstar {
            match mp.provenance {
                Provenance::Pi2 => {
                    pi2.insert(pair_key(sys, mp.pair));
                }
                Provenance::Chosen => {
                    let (ia, ib) = (sys.super_index(sys.super_of(mp.a)), sys.super_index(sys.super_of(mp.b)));
                    match (u[ia], u[ib]) {
                        (Some(c), Some(d)) => {
                            let p = sys.pair_between(c, d).ok_or_else(|| decode_err("replacement not adjacent"))?;
                            pi2.insert(pair_key(sys, p));
                        }
                        (None, None) => {}
                        _ => return Err(decode_err("half-filled evicted pair")),
                    }
                    u[ia] = Some(mp.a);
                    u[ib] = Some(mp.b);
                }
            }
        }
        let jgroups: BTreeMap<PairId, usize> = self.jstar.iter().map(|mp| (mp.pair, mp.path)).collect();
        let mut bits = self.y.clone();
        let lowered = lowered_pairs(sys, &u, &pi2);
        for &p in &lowered {
            let idx = match (self.star_derived.lowered.get(&p), jgroups.get(&p)) {
                (Some(&i), _) | (None, Some(&i)) => i,
                (None, None) => {
                    let truth = self.truth.as_ref().map(|t| t.world.rho.derived.lowered[&p] as u64);
                    self.chan.sym(sys.group_size() as u64, truth)? as usize
                }
            };
            bits[sys.var_path(p, idx)] = true;
        }
        let mut advice = self.star.quad.advice.clone();
        for &p in self.star_derived.lowered.keys() {
            if lowered.contains(&p) {
                continue;
            }
            let truth = self.truth.as_ref().map(|t| {
                let [b1, b2] = t.world.rho.quad.advice.get(p);
                2 * u64::from(b1) + u64::from(b2)
            });
            let v = self.chan.sym(4, truth)?;
            advice.0[p] = [v >> 1 & 1 == 1, v & 1 == 1];
        }
        let quad = Quadruple {
            tau: TauAssignment { r: sys.r, bits, restarts: self.star.quad.tau.restarts },
            u,
            pi2: pi2.into_iter().collect(),
            advice: AdviceString(advice.0),
        };
        let derived = quad.derive(sys)?;
        let k = quad.pi2.len();
        Ok(PartialRestriction { quad, derived, k, k_forced_zero: self.star.k_forced_zero, restarts: self.star.restarts })
    }
}

fn engine<'w, 'a>(
    sys: &'a PathSystem,
    parts: &[PartTree],
    star: &'w StarQuadruple,
    chan: Channel<'w>,
    truth: Option<Truth<'w, 'a>>,
) -> Result<Engine<'w, 'a>, SwitchingError> {
    let star_derived = star.quad.derive(sys)?;
    let mut live_star = vec![false; sys.num_minis()];
    for &s in &star_derived.live {
        live_star[s] = true;
    }
    Ok(Engine {
        sys,
        branches: one_branches(parts),
        star,
        y: star_derived.y.clone(),
        star_derived,
        live_star,
        grid: ReducedGrid::new(sys.m)?,
        chan,
        truth,
        info: Info::default(),
        e: BTreeMap::new(),
        stages: Vec::new(),
        skips: Vec::new(),
        jstar: Vec::new(),
    })
}

/// Encodes a finished canonical run as `ρ*` plus external information, and
/// checks that decoding gives back `ρ` and the run's stages.
pub fn encode(world: &RhoWorld, parts: &[PartTree], run: &CanonicalRun) -> Result<Encoding, SwitchingError> {
    if run.label.is_none() {
        return Err(SwitchingError::Encode("run was cut at the depth cap".into()));
    }
    let star = build_star(world, run)?;
    let jpair = run.j_star().into_iter().flat_map(|mp| [(mp.a, mp), (mp.b, mp)]).collect();
    let chan = Channel::Write { out: Vec::new(), bits: 0.0, symbols: 0 };
    let mut e = engine(world.sys, parts, &star, chan, Some(Truth { world, run, jpair }))?;
    e.run()?;
    let rho = e.finish()?;
    if rho != *world.rho {
        return Err(SwitchingError::Encode("replay does not rebuild the restriction".into()));
    }
    let skips = std::mem::take(&mut e.skips);
    let Channel::Write { out, bits, symbols } = e.chan else { unreachable!("encoder writes") };
    Ok(Encoding { info: ExternalInfo { bytes: out }, star: star.clone(), bits, symbols, skips })
}

/// Rebuilds `ρ` and the stages of the canonical run from `ρ*` and the
/// external information.
pub fn decode(sys: &PathSystem, parts: &[PartTree], star: &StarQuadruple, info: &ExternalInfo) -> Result<Decoded, SwitchingError> {
    let mut e = engine(sys, parts, star, Channel::Read { data: &info.bytes, pos: 0 }, None)?;
    e.run()?;
    let rho = e.finish()?;
    if let Channel::Read { data, pos } = e.chan {
        if pos != data.len() {
            return Err(decode_err(format!("{} trailing bytes", data.len() - pos)));
        }
    }
    Ok(Decoded { rho, stages: e.stages, skips: e.skips })
}

/// Branches that `ρ*` alone forces to one.
pub fn forced_by_star(sys: &PathSystem, parts: &[PartTree], star: &StarQuadruple) -> Result<Vec<usize>, SwitchingError> {
    let e = engine(sys, parts, star, Channel::Read { data: &[], pos: 0 }, None)?;
    Ok((0..e.branches.len()).filter(|&b| e.forced(&e.branches[b])).collect())
}
