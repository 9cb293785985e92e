//! Equivariant controlled objects with finite support and their controlled
//! morphisms in matrix form.

mod iso;
mod morphism;
mod object;
mod pushforward;

pub use iso::mor_is_iso;
pub use morphism::{
    biproduct_injection, biproduct_projection, mor_add, mor_check, mor_compose, mor_identity, mor_negate, mor_zero,
    ControlledMorphism,
};
pub use object::{obj_biproduct, obj_check, ControlledObject};
pub use pushforward::{fibers_over, pushforward_mor, pushforward_mor_between, pushforward_obj, reassociate};

pub(crate) use morphism::parse_entry_table;
pub(crate) use object::show;
