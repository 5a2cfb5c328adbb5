use crate::canonical::conjunction_tree;
use crate::world::{PartTree, Probe};
use rand::seq::index::sample;
use rand::Rng;
use restriction_space::PathSystem;
use serde::{Deserialize, Serialize};

/// Shape of a random DNF over probes: `terms` conjunctions of `width`
/// probes on distinct mini-squares, each probe with `arity` answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnfSpec {
    pub terms: usize,
    pub width: usize,
    pub arity: u8,
}

/// Draws the parts independently of any restriction.
pub fn random_dnf<G: Rng + ?Sized>(sys: &PathSystem, spec: DnfSpec, rng: &mut G) -> Vec<PartTree> {
    let width = spec.width.min(sys.num_minis());
    (0..spec.terms)
        .map(|_| {
            let steps: Vec<(Probe, u8)> = sample(rng, sys.num_minis(), width)
                .into_iter()
                .map(|mini| (Probe { mini, salt: rng.gen(), arity: spec.arity }, rng.gen_range(0..spec.arity)))
                .collect();
            conjunction_tree(&steps)
        })
        .collect()
}

/// A family of DNFs all over the same restriction.
pub fn random_family<G: Rng + ?Sized>(sys: &PathSystem, spec: DnfSpec, count: usize, rng: &mut G) -> Vec<Vec<PartTree>> {
    (0..count).map(|_| random_dnf(sys, spec, rng)).collect()
}
