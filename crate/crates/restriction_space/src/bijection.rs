use crate::params::MAX_GROUP;
use crate::RestrictionError;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Raise,
    Lower,
}

/// `f` on the weight-`t` slice of `{0,1}^size`: a map onto the `(t-1)`-slice
/// with `f(v) ⊂ v` and every preimage of size at most four.
#[derive(Debug, Clone)]
pub struct SliceTable {
    pub size: usize,
    pub t: usize,
    image: HashMap<u32, u32>,
    /// Sorted lexicographically by the list of set indices.
    preimages: HashMap<u32, Vec<u32>>,
}

impl SliceTable {
    pub fn f(&self, v: u32) -> Option<u32> {
        self.image.get(&v).copied()
    }

    pub fn preimage(&self, w: u32) -> &[u32] {
        self.preimages.get(&w).map_or(&[], Vec::as_slice)
    }

    pub fn domain_len(&self) -> usize {
        self.image.len()
    }

    pub fn max_preimage(&self) -> usize {
        self.preimages.values().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn slice(size: usize, t: usize) -> Vec<u32> {
    fn rec(size: usize, t: usize, from: usize, cur: u32, out: &mut Vec<u32>) {
        if t == 0 {
            out.push(cur);
            return;
        }
        for i in from..=size - t {
            rec(size, t - 1, i + 1, cur | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if t <= size {
        rec(size, t, 0, 0, &mut out);
    }
    out
}

fn index_list(v: u32) -> Vec<u32> {
    (0..32).filter(|i| v >> i & 1 == 1).collect()
}

/// Kuhn's algorithm with an explicit stack. `adj[l]` lists right vertices;
/// `cap` copies of each right vertex are available. Returns the right vertex
/// of every left vertex, `None` where unmatched.
fn kuhn(adj: &[Vec<usize>], n_right: usize, cap: usize) -> Vec<Option<usize>> {
    let slots = n_right * cap;
    let mut owner: Vec<Option<usize>> = vec![None; slots];
    let mut mate: Vec<Option<usize>> = vec![None; adj.len()];
    let mut seen = vec![0u32; slots];
    let mut stamp = 0u32;
    for root in 0..adj.len() {
        // Greedy first.
        if let Some(slot) = adj[root].iter().flat_map(|&r| (0..cap).map(move |c| r * cap + c)).find(|&s| owner[s].is_none()) {
            owner[slot] = Some(root);
            mate[root] = Some(slot);
            continue;
        }
        stamp += 1;
        // Frames: (left vertex, next adjacency position, slot it came through).
        let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(root, 0, None)];
        let mut found = None;
        while let Some(top) = stack.len().checked_sub(1) {
            let (l, pos, _) = stack[top];
            if pos >= adj[l].len() * cap {
                stack.pop();
                continue;
            }
            stack[top].1 += 1;
            let slot = adj[l][pos / cap] * cap + pos % cap;
            if seen[slot] == stamp {
                continue;
            }
            seen[slot] = stamp;
            match owner[slot] {
                None => {
                    found = Some(slot);
                    break;
                }
                Some(next) => stack.push((next, 0, Some(slot))),
            }
        }
        let Some(mut slot) = found else { continue };
        while let Some((l, _, via)) = stack.pop() {
            owner[slot] = Some(l);
            mate[l] = Some(slot);
            match via {
                Some(v) => slot = v,
                None => break,
            }
        }
    }
    mate.into_iter().map(|s| s.map(|s| s / cap)).collect()
}

fn build(size: usize, t: usize) -> Result<SliceTable, RestrictionError> {
    let uppers = slice(size, t);
    let lowers = slice(size, t - 1);
    let upper_index: HashMap<u32, usize> = uppers.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let lower_index: HashMap<u32, usize> = lowers.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    // M1 saturates the lower slice.
    let lower_adj: Vec<Vec<usize>> = lowers
        .iter()
        .map(|&w| (0..size).filter(|i| w >> i & 1 == 0).map(|i| upper_index[&(w | 1 << i)]).collect())
        .collect();
    let m1 = kuhn(&lower_adj, uppers.len(), 1);
    let mut image: HashMap<u32, u32> = HashMap::with_capacity(uppers.len());
    for (li, u) in m1.iter().enumerate() {
        let u = u.ok_or_else(|| RestrictionError::Bijection(format!("no saturating matching of slice {} in {size}", t - 1)))?;
        image.insert(uppers[u], lowers[li]);
    }
    // M2 sends the remaining uppers to lowers, three per lower at most.
    let rest: Vec<u32> = uppers.iter().copied().filter(|u| !image.contains_key(u)).collect();
    let rest_adj: Vec<Vec<usize>> = rest
        .iter()
        .map(|&u| (0..size).filter(|i| u >> i & 1 == 1).map(|i| lower_index[&(u & !(1 << i))]).collect())
        .collect();
    let m2 = kuhn(&rest_adj, lowers.len(), 3);
    for (ri, w) in m2.iter().enumerate() {
        let w = w.ok_or_else(|| RestrictionError::Bijection(format!("tripled matching misses slice {t} in {size}")))?;
        image.insert(rest[ri], lowers[w]);
    }
    let mut preimages: HashMap<u32, Vec<u32>> = HashMap::new();
    for (&u, &w) in &image {
        preimages.entry(w).or_default().push(u);
    }
    for list in preimages.values_mut() {
        list.sort_by_key(|&u| index_list(u));
    }
    Ok(SliceTable { size, t, image, preimages })
}

/// Memoized table for `f` on the weight-`t` slice of size `size = 2R`.
pub fn slice_table(size: usize, t: usize) -> Result<Arc<SliceTable>, RestrictionError> {
    type Tables = Mutex<HashMap<(usize, usize), Arc<SliceTable>>>;
    static CACHE: OnceLock<Tables> = OnceLock::new();
    check_f_domain(size, t)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache").get(&(size, t)) {
        return Ok(t.clone());
    }
    let table = Arc::new(build(size, t)?);
    cache.lock().expect("table cache").insert((size, t), table.clone());
    Ok(table)
}

fn check_f_domain(size: usize, t: usize) -> Result<(), RestrictionError> {
    if size == 0 || !size.is_multiple_of(2) || size > MAX_GROUP {
        return Err(RestrictionError::Params(format!("group size {size}")));
    }
    let r = size / 2;
    if 2 * t < r || t > r || t == 0 {
        return Err(RestrictionError::Params(format!("weight {t} outside [R/2, R] for R = {r}")));
    }
    Ok(())
}

pub fn to_mask(v: &[bool]) -> u32 {
    v.iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (i, _)| acc | 1 << i)
}

pub fn from_mask(mask: u32, size: usize) -> Vec<bool> {
    (0..size).map(|i| mask >> i & 1 == 1).collect()
}

fn full(size: usize) -> u32 {
    (1u32 << size) - 1
}

/// `f(v)` for `R/2 ≤ |v| ≤ R`.
pub fn almost_bijection_f(v: &[bool]) -> Result<Vec<bool>, RestrictionError> {
    let t = v.iter().filter(|&&b| b).count();
    let table = slice_table(v.len(), t)?;
    Ok(from_mask(table.f(to_mask(v)).expect("slice covers v"), v.len()))
}

/// `g(v) = ¬f(¬v)` for `R ≤ |v| ≤ 3R/2`; raises the weight by one.
pub fn almost_bijection_g(v: &[bool]) -> Result<Vec<bool>, RestrictionError> {
    let comp: Vec<bool> = v.iter().map(|b| !b).collect();
    Ok(almost_bijection_f(&comp)?.into_iter().map(|b| !b).collect())
}

/// `f` on masks.
pub fn f_mask(size: usize, v: u32) -> Result<u32, RestrictionError> {
    Ok(slice_table(size, v.count_ones() as usize)?.f(v).expect("slice covers v"))
}

pub fn g_mask(size: usize, v: u32) -> Result<u32, RestrictionError> {
    Ok(f_mask(size, !v & full(size))? ^ full(size))
}

/// All `v` with `f(v) = w`, sorted.
pub fn f_preimage(size: usize, w: u32) -> Result<Vec<u32>, RestrictionError> {
    Ok(slice_table(size, w.count_ones() as usize + 1)?.preimage(w).to_vec())
}

/// All `v` with `g(v) = w`, sorted by the index lists of the complements.
pub fn g_preimage(size: usize, w: u32) -> Result<Vec<u32>, RestrictionError> {
    let f = full(size);
    Ok(f_preimage(size, !w & f)?.into_iter().map(|v| v ^ f).collect())
}

/// Picks one of at most four candidates with two advice bits: a single
/// candidate regardless, `b₁` among two, the first unless `b₁ ≠ b₂` among
/// three, and `(b₁, b₂)` read as a number among four.
pub fn select(candidates: &[u32], advice: [bool; 2]) -> Option<u32> {
    let [b1, b2] = advice.map(usize::from);
    let i = match candidates.len() {
        1 => 0,
        2 => b1,
        3 if b1 == b2 => 0,
        3 => 1 + b1,
        4 => 2 * b1 + b2,
        _ => return None,
    };
    candidates.get(i).copied()
}

/// Advice values under which [`select`] returns `target`.
pub fn advice_selecting(candidates: &[u32], target: u32) -> Vec<[bool; 2]> {
    ALL_ADVICE.into_iter().filter(|&a| select(candidates, a) == Some(target)).collect()
}

pub const ALL_ADVICE: [[bool; 2]; 4] = [[false, false], [false, true], [true, false], [true, true]];

pub fn is_lopsided(weight: usize, size: usize) -> bool {
    let r = size / 2;
    2 * weight < r || 2 * (size - weight) < r
}

/// New state of a group after lowering or raising one path. Lowering at
/// weight `≤ R` applies `f`; above `R` it picks a `g`-preimage. Raising
/// mirrors this.
pub fn next_state(size: usize, state: u32, dir: Direction, advice: [bool; 2]) -> Result<u32, RestrictionError> {
    let t = state.count_ones() as usize;
    let r = size / 2;
    if is_lopsided(t, size) {
        return Err(RestrictionError::Lopsided { weight: t, size });
    }
    let pick = |c: Vec<u32>| select(&c, advice).ok_or_else(|| RestrictionError::Bijection(format!("{} candidates", c.len())));
    match dir {
        Direction::Lower if t <= r => f_mask(size, state),
        Direction::Lower => pick(g_preimage(size, state)?),
        Direction::Raise if t >= r => g_mask(size, state),
        Direction::Raise => pick(f_preimage(size, state)?),
    }
}

/// Index of the path whose flip realises [`next_state`].
pub fn choose_path(state: &[bool], dir: Direction, advice: [bool; 2]) -> Result<usize, RestrictionError> {
    choose_path_mask(state.len(), to_mask(state), dir, advice)
}

pub fn choose_path_mask(size: usize, state: u32, dir: Direction, advice: [bool; 2]) -> Result<usize, RestrictionError> {
    let next = next_state(size, state, dir, advice)?;
    let diff = state ^ next;
    debug_assert_eq!(diff.count_ones(), 1);
    Ok(diff.trailing_zeros() as usize)
}
