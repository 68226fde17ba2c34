//! Two-dimensional HP lattice proteins: structures, contacts, exhaustive
//! enumeration, designability census and design instances.

mod census;
mod enumerate;
mod fold;
mod instance;
mod search;
mod structure;

pub use census::{design_census, Census};
pub use enumerate::{count_canonical_walks, enumerate_saws, for_each_canonical_walk};
pub use fold::{fold_verify, FoldReport};
pub use instance::{
    bundled_instance, select_from_census, select_instance, table_composition, table_energy,
    weight_restricted_minimizers, Instance, BUNDLED_INSTANCES, INSTANCE_TABLE,
};
pub(crate) use instance::{for_each_weight, hh_with_masks};
pub use search::{densest_at_weight, search_instance, tolerates_penalty, SearchConfig};
pub use structure::{hp_energy, parse_structure, transform_moves, ContactMap, Move, Sequence, Structure};

/// Largest chain length for materialized enumeration and the designability
/// census.
pub const ENUMERATION_BOUND: usize = 14;

/// Largest chain length for fold verification (streams the walks instead of
/// storing them).
pub const FOLD_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("walk revisits a lattice site at step {step}")]
    SelfIntersection { step: usize },
    #[error("unexpected character {token:?} at position {pos}")]
    BadToken { pos: usize, token: char },
    #[error("a structure needs at least two beads")]
    TooShort,
    #[error("chain length {n} exceeds the supported bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid contact ({i}, {j}) for chain length {n}")]
    BadContact { i: usize, j: usize, n: usize },
    #[error("composition n_h = {n_h} is outside [0, {n}]")]
    BadComposition { n: usize, n_h: usize },
    #[error("sequence optimization has {count} minimizers, expected exactly one")]
    NotUnique { count: usize },
    #[error("no structure of length {n} gives a valid instance with n_h = {n_h}")]
    NoValidInstance { n: usize, n_h: usize },
    #[error("minimum energy mismatch: file says {expected}, recomputed {got}")]
    EnergyMismatch { expected: i32, got: i32 },
    #[error("stored solution is not the unique minimizer")]
    SolutionMismatch,
    #[error("instance file line {line}: {reason}")]
    BadInstanceFile { line: usize, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}
