mod error;
mod formula;
mod php;
mod proof;
mod subst;

pub use error::FormulaError;
pub use formula::{entails, Formula, Var};
pub use php::{edge_name, generate_php, parse_edge_name, PHPInstance, PhpNode};
pub use proof::{check_proof, rule_applies, FregeProof, ProofError, ProofFile, ProofLine, Rejection, Rule};
pub use subst::{apply_substitution, apply_with, Literal, Replacement, SubstitutionMap};
