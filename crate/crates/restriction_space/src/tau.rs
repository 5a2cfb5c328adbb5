use crate::bijection::is_lopsided;
use crate::system::{PairId, PathSystem};
use crate::RestrictionError;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Type bits `y_P` of all variable paths, indexed like
/// [`PathSystem::var_path`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TauAssignment {
    pub r: usize,
    pub bits: Vec<bool>,
    pub restarts: usize,
}

impl TauAssignment {
    pub fn group(&self, p: PairId) -> &[bool] {
        &self.bits[p * 2 * self.r..(p + 1) * 2 * self.r]
    }

    pub fn group_mut(&mut self, p: PairId) -> &mut [bool] {
        let r = self.r;
        &mut self.bits[p * 2 * r..(p + 1) * 2 * r]
    }

    pub fn group_mask(&self, p: PairId) -> u32 {
        crate::bijection::to_mask(self.group(p))
    }

    pub fn set_group_mask(&mut self, p: PairId, mask: u32) {
        for (i, b) in self.group_mut(p).iter_mut().enumerate() {
            *b = mask >> i & 1 == 1;
        }
    }

    pub fn weight(&self, p: PairId) -> usize {
        self.group(p).iter().filter(|&&b| b).count()
    }

    /// True paths minus false paths around a mini-square.
    pub fn signed_sum(&self, sys: &PathSystem, mini: usize) -> i64 {
        sys.incident(mini).iter().map(|&p| 2 * self.weight(p) as i64 - 2 * self.r as i64).sum()
    }

    pub fn is_balanced(&self, sys: &PathSystem) -> bool {
        (0..sys.num_minis()).all(|v| self.signed_sum(sys, v) == 0)
    }

    pub fn lopsided_pairs(&self) -> Vec<PairId> {
        (0..self.bits.len() / (2 * self.r)).filter(|&p| is_lopsided(self.weight(p), 2 * self.r)).collect()
    }
}

/// Alternating 4-cycles in the pair graph. Adding one to the first and third
/// pair and removing one from the others keeps every mini-square balanced.
fn four_cycles(sys: &PathSystem) -> Vec<[PairId; 4]> {
    let mut out = Vec::new();
    let pair = |x, y| sys.pair_between(x, y).expect("adjacent minis");
    for p in sys.pairs() {
        let (s, t) = (sys.super_of(p.a), sys.super_of(p.b));
        for c in sys.minis_of(s) {
            for d in sys.minis_of(t) {
                if c > p.a && d != p.b {
                    out.push([pair(p.a, p.b), pair(c, p.b), pair(c, d), pair(p.a, d)]);
                }
            }
        }
    }
    let m = sys.m;
    for i in 0..m.saturating_sub(1) {
        for j in 0..m - 1 {
            for a in sys.minis_of((i, j)) {
                for b in sys.minis_of((i, j + 1)) {
                    for c in sys.minis_of((i + 1, j + 1)) {
                        for d in sys.minis_of((i + 1, j)) {
                            out.push([pair(a, b), pair(b, c), pair(c, d), pair(d, a)]);
                        }
                    }
                }
            }
        }
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// How `τ` is kept away from lopsided groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauMode {
    /// Resample while any group is lopsided.
    Restart,
    /// Never leave the non-lopsided states.
    Conditioned,
}

/// Samples balanced group weights with a Metropolis chain whose stationary
/// law is proportional to `∏ C(2R, w_p)`, the law of the weights under a
/// uniform balanced `τ`. With [`TauMode::Restart`] a sample with a lopsided group
/// counts as a restart and the chain moves on. In [`TauMode::Conditioned`] the
/// chain never leaves the non-lopsided states. Positions inside each group are
/// uniform.
pub fn sample_tau<G: Rng + ?Sized>(
    sys: &PathSystem,
    restart_cap: usize,
    mode: TauMode,
    rng: &mut G,
) -> Result<TauAssignment, RestrictionError> {
    let conditioned = mode == TauMode::Conditioned;
    let size = sys.group_size();
    let cycles = four_cycles(sys);
    let np = sys.num_pairs();
    let mut w = vec![sys.r; np];
    let weight_of: Vec<f64> = (0..=size).map(|k| binom(size, k)).collect();
    let step = |w: &mut Vec<usize>, rng: &mut G| {
        if cycles.is_empty() {
            return;
        }
        let cyc = cycles[rng.gen_range(0..cycles.len())];
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut next = [0usize; 4];
        let mut ratio = 1.0;
        for (k, &p) in cyc.iter().enumerate() {
            let d = if k % 2 == 0 { sign } else { -sign };
            let v = w[p] as i64 + d;
            if v < 0 || v > size as i64 || (conditioned && is_lopsided(v as usize, size)) {
                return;
            }
            next[k] = v as usize;
            ratio *= weight_of[next[k]] / weight_of[w[p]];
        }
        if ratio >= 1.0 || rng.gen::<f64>() < ratio {
            for (k, &p) in cyc.iter().enumerate() {
                w[p] = next[k];
            }
        }
    };
    for _ in 0..50 * np {
        step(&mut w, rng);
    }
    let mut restarts = 0;
    loop {
        if w.iter().all(|&x| !is_lopsided(x, size)) {
            break;
        }
        restarts += 1;
        if restarts > restart_cap {
            let bad = w.iter().filter(|&&x| is_lopsided(x, size)).count();
            return Err(RestrictionError::RestartCap {
                stage: "tau",
                restarts: restarts - 1,
                reason: format!("{bad} lopsided groups"),
            });
        }
        for _ in 0..10 * np {
            step(&mut w, rng);
        }
    }
    let mut bits = Vec::with_capacity(np * size);
    for &x in &w {
        let mut g: Vec<bool> = (0..size).map(|i| i < x).collect();
        g.shuffle(rng);
        bits.extend(g);
    }
    Ok(TauAssignment { r: sys.r, bits, restarts })
}
