//! Equivariant controlled objects over G-bornological coarse spaces.
//!
//! The crate is organised bottom-up: finite groups and their actions
//! ([`group`]), coarse spaces and their morphisms ([`coarse`]), exact
//! matrices ([`ring`], [`matrix`]), additive symmetric monoidal categories
//! with a strict group action ([`additive`]), the categories of controlled
//! objects ([`controlled`]), the monoidal total category over all spaces
//! ([`groth`]), and a seeded law-checking harness ([`verify`]).

pub mod additive;
pub mod coarse;
pub mod controlled;
pub mod error;
pub mod groth;
pub mod group;
pub mod matrix;
pub mod oracle;
pub mod ring;
pub mod set;
pub mod verify;
