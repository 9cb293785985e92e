//! Coarse structures, bornologies, and the spaces and maps built from them.

pub mod entourage;
pub mod map;
pub mod structure;

pub use entourage::{ent_compose, ent_invert, ent_saturate, ent_thicken, Entourage, PairSet};
pub use map::{morphism_check, space_constraints, IndexMap, LeafOp, MapNf, MapTerm, SpaceMorphism};
pub use structure::{
    coarse_member, compat_check, space_tensor, Bornology, BornCoarseSpace, CoarseStructure, Cofinal, CompatReport,
    Membership, DEFAULT_SEARCH_BOUND,
};
