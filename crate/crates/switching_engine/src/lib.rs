//! Decision trees over grid matchings and over restricted path systems:
//! t-evaluations of proofs, the canonical decision tree of a DNF under a
//! partial restriction, the star encoding that inverts it, and the common
//! tree for a family of DNFs.

mod canonical;
mod common;
mod dnf;
mod error;
mod evaluation;
mod match_tree;
mod star;
mod tree;
mod world;

pub use canonical::{
    branch_followed, brute_force_disagreements, canonical_tree, conjunction_tree, dnf_value, first_forceable, force_branch,
    long_branch, one_branches, Branch, CanonicalRun, CanonicalTree, Stage,
};
pub use common::{common_tree, CommonLeaf, CommonTree, Round};
pub use dnf::{random_dnf, random_family, DnfSpec};
pub use error::SwitchingError;
pub use evaluation::{audit_proof, verify_evaluation, AuditReport, LineFailure, TEvaluation, Violation};
pub use match_tree::{
    check_capacity, consistent_answers, edge_value, natural_tree, prune, query_all, query_cover, restrict, MatchQueryTree,
};
pub use star::{build_star, decode, encode, forced_by_star, Decoded, Encoding, ExternalInfo, StarQuadruple};
pub use tree::DecisionTree;
pub use world::{
    config_hash, direction, splitmix64, step, Info, MatchedPair, PartTree, Probe, Provenance, ReducedGrid, RhoWorld,
};
