//! Layout, sampling and reduction machinery for random restrictions of the
//! grid perfect-matching principle. A restriction keeps one mini-square per
//! super-square alive and maps every edge variable of the `n × n` instance
//! to a constant or to a short formula over the paths between survivors.

mod assemble;
mod bijection;
mod error;
mod layout;
mod params;
mod reduce;
mod restriction;
mod system;
mod tau;

pub use bijection::{
    advice_selecting, almost_bijection_f, almost_bijection_g, choose_path, choose_path_mask, f_mask, f_preimage,
    from_mask, g_mask, g_preimage, is_lopsided, next_state, select, slice, slice_table, to_mask, Direction,
    SliceTable, ALL_ADVICE,
};
pub use assemble::{
    brick_dents, check_newmatching, local_matching, mini_dents, path_types, survivor_centre, Assembly, LocalMatching,
    NewMatchingReport,
};
pub use error::RestrictionError;
pub use layout::{build_layout, BrickId, BrickStep, BrickUse, Layout, LayoutSummary, PathKind, Region, RoutedPath};
pub use params::{LayoutParams, Profile, DEFAULT_RESTART_CAP, MAX_GROUP, STANDARD_BRICK, TOY_BRICK};
pub use reduce::{reduced_instance, sample_full_restriction, z_name, AxiomReport, ReplacementStats, Rep, Substitution};
pub use restriction::{
    sample_partial_on, sample_partial_restriction, sample_sigma, sample_u, AdviceString, ChosenPath, Derived, FullRestriction, PartialOptions,
    PartialRestriction, Quadruple,
};
pub use system::{MiniId, MiniPair, Orientation, PairId, PathSystem, SuperId};
pub use tau::{sample_tau, TauAssignment, TauMode};
