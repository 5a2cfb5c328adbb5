//! Partial matchings on the `n × n` grid that extend to complete matchings of
//! small products `S × T` of even-interval unions, plus the dent-peeling
//! matcher for nearly complete squares.

mod consistency;
mod error;
mod intervals;
mod onion;
mod partial;

pub use consistency::{exact_witness, extend_with_node, is_locally_consistent, ExtensionWitness, WITNESS_FACTOR};
pub use error::MatchingError;
pub use intervals::{well_cover, IntervalUnion, LeftRightProfile};
pub use onion::{corner_distance, match_dented_square, match_square_with_dents, onion_match};
pub use partial::PartialMatching;
