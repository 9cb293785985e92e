//! Additive symmetric monoidal categories with a strict group action.
//!
//! Two concrete families are provided: [`MatCat`] (ranks and matrices, with
//! the trivial action) and [`ShiftCat`] (rank tuples indexed by the group,
//! which acts by translating the index). Everything downstream is generic
//! over [`AdditiveCategory`]; [`InstanceSpec`] selects an instance at run
//! time and [`with_instance!`](crate::with_instance) dispatches to it.

mod laws;
mod mat;
mod shift;

use std::fmt::Debug;
use std::sync::Arc;

use rand::RngCore;
use serde_json::{json, Value};

use crate::group::{FiniteGroup, GroupElem};
use crate::ring::RingSpec;

pub use laws::{check_instance_laws, instance_law_names, run_instance_law, strictness, InstanceLawReport};
pub use mat::MatCat;
pub use shift::{ShiftCat, ShiftMor};

/// A chosen biproduct with its injections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct<A: AdditiveCategory> {
    pub obj: A::Obj,
    pub injections: Vec<A::Mor>,
    pub projections: Vec<A::Mor>,
}

pub trait AdditiveCategory: Clone + Debug + Send + Sync + 'static {
    type Obj: Clone + Debug + PartialEq + Eq + Send + Sync;
    type Mor: Clone + Debug + PartialEq + Send + Sync;

    fn name(&self) -> String;
    fn spec(&self) -> InstanceSpec;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn zero_obj(&self) -> Self::Obj;
    fn is_zero_obj(&self, a: &Self::Obj) -> bool;
    /// The zero morphism `from → to`.
    fn zero(&self, from: &Self::Obj, to: &Self::Obj) -> Self::Mor;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn neg(&self, f: &Self::Mor) -> Self::Mor;
    fn is_zero(&self, f: &Self::Mor) -> bool;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;

    fn sum_obj(&self, objs: &[Self::Obj]) -> Self::Obj;
    fn injection(&self, objs: &[Self::Obj], j: usize) -> Self::Mor;
    fn projection(&self, objs: &[Self::Obj], j: usize) -> Self::Mor;

    fn biproduct(&self, objs: &[Self::Obj]) -> Biproduct<Self> {
        Biproduct {
            obj: self.sum_obj(objs),
            injections: (0..objs.len()).map(|j| self.injection(objs, j)).collect(),
            projections: (0..objs.len()).map(|j| self.projection(objs, j)).collect(),
        }
    }

    /// The morphism `⊕ sources → ⊕ targets` whose `(i, j)` block is
    /// `block(i, j)` (zero when `None`).
    fn matrix_from_blocks(
        &self,
        targets: &[Self::Obj],
        sources: &[Self::Obj],
        block: &mut dyn FnMut(usize, usize) -> Option<Self::Mor>,
    ) -> Self::Mor {
        let mut acc = self.zero(&self.sum_obj(sources), &self.sum_obj(targets));
        for i in 0..targets.len() {
            for j in 0..sources.len() {
                if let Some(b) = block(i, j) {
                    let term = self.compose(
                        &self.injection(targets, i),
                        &self.compose(&b, &self.projection(sources, j)),
                    );
                    acc = self.add(&acc, &term);
                }
            }
        }
        acc
    }

    /// The `(i, j)` block `proj_i ∘ m ∘ inj_j`.
    fn block(&self, targets: &[Self::Obj], sources: &[Self::Obj], m: &Self::Mor, i: usize, j: usize) -> Self::Mor {
        self.compose(&self.projection(targets, i), &self.compose(m, &self.injection(sources, j)))
    }

    fn unit(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// `(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)`.
    fn alpha(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Self::Mor;
    /// `1 ⊗ a → a`.
    fn eta(&self, a: &Self::Obj) -> Self::Mor;
    /// `a ⊗ b → b ⊗ a`.
    fn sigma(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;

    /// Can this instance carry an action of `group`?
    fn acts_with(&self, group: &FiniteGroup) -> bool;
    fn act_obj(&self, g: GroupElem, a: &Self::Obj) -> Self::Obj;
    fn act_mor(&self, g: GroupElem, f: &Self::Mor) -> Self::Mor;
    /// `1 → g(1)`.
    fn epsilon(&self, g: GroupElem) -> Self::Mor;
    /// `g(a) ⊗ g(b) → g(a ⊗ b)`.
    fn mu(&self, g: GroupElem, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;

    fn obj_to_json(&self, a: &Self::Obj) -> Value;
    fn obj_from_json(&self, v: &Value) -> Option<Self::Obj>;
    fn mor_to_json(&self, f: &Self::Mor) -> Value;
    fn mor_from_json(&self, v: &Value) -> Option<Self::Mor>;

    /// A random nonzero object fixed by every element of `stabilizer`.
    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize, stabilizer: &[GroupElem]) -> Self::Obj;
    fn random_mor(&self, rng: &mut dyn RngCore, from: &Self::Obj, to: &Self::Obj) -> Self::Mor;
    /// A random automorphism of `a`.
    fn random_auto(&self, rng: &mut dyn RngCore, a: &Self::Obj) -> Self::Mor;
    /// Diagonal automorphism with entry `-1` on basis vectors `j` where
    /// `negate(j)` holds and `+1` elsewhere.
    fn sign_diag(&self, a: &Self::Obj, negate: &dyn Fn(usize) -> bool) -> Self::Mor;
}

/// Run-time selection of an additive instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSpec {
    Mat(RingSpec),
    Shift { group: Arc<FiniteGroup>, group_name: String, ring: RingSpec },
    /// Matrices with the symmetry replaced by identities.
    FakeSigma(RingSpec),
}

impl InstanceSpec {
    pub fn name(&self) -> String {
        match self {
            InstanceSpec::Mat(r) => format!("MatCat({})", r.name()),
            InstanceSpec::Shift { group_name, ring, .. } => format!("ShiftCat({group_name},{})", ring.name()),
            InstanceSpec::FakeSigma(r) => format!("FakeSigma({})", r.name()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            InstanceSpec::Mat(r) => json!({"instance": "mat", "ring": r.to_json()}),
            InstanceSpec::Shift { group_name, ring, .. } => {
                json!({"instance": "shift", "group": group_name, "ring": ring.to_json()})
            }
            InstanceSpec::FakeSigma(r) => json!({"instance": "fake_sigma", "ring": r.to_json()}),
        }
    }

    /// Parses `{"instance": ..., "ring": ...}`; shift instances look their
    /// group up with `group_of`.
    pub fn parse(v: &Value, group_of: &dyn Fn(&str) -> Option<Arc<FiniteGroup>>) -> Result<Self, String> {
        let ring = RingSpec::parse(v.get("ring").ok_or("instance without ring")?).ok_or("unknown ring")?;
        match v.get("instance").and_then(Value::as_str) {
            Some("mat") => Ok(InstanceSpec::Mat(ring)),
            Some("fake_sigma") => Ok(InstanceSpec::FakeSigma(ring)),
            Some("shift") => {
                let name = v.get("group").and_then(Value::as_str).ok_or("shift instance without group")?;
                let group = group_of(name).ok_or_else(|| format!("unknown group {name:?}"))?;
                Ok(InstanceSpec::Shift {
                    group,
                    group_name: name.to_string(),
                    ring,
                })
            }
            other => Err(format!("unknown instance {other:?}")),
        }
    }

    /// Does this instance carry an action of `group`?
    pub fn supports(&self, group: &FiniteGroup) -> bool {
        match self {
            InstanceSpec::Shift { group: g, .. } => **g == *group,
            _ => true,
        }
    }
}

/// Binds `$cat` to the concrete instance selected by `$spec` and evaluates
/// `$body` once for that type.
#[macro_export]
macro_rules! with_instance {
    ($spec:expr, |$cat:ident| $body:expr) => {{
        use $crate::additive::{InstanceSpec, MatCat, ShiftCat};
        use $crate::ring::{IntMod, Integers, Rationals, RingSpec};
        match $spec {
            InstanceSpec::Mat(RingSpec::Integers) => {
                let $cat = MatCat::new(Integers);
                $body
            }
            InstanceSpec::Mat(RingSpec::Rationals) => {
                let $cat = MatCat::new(Rationals);
                $body
            }
            InstanceSpec::Mat(RingSpec::Mod(n)) => {
                let $cat = MatCat::new(IntMod::new(*n).expect("validated modulus"));
                $body
            }
            InstanceSpec::FakeSigma(RingSpec::Integers) => {
                let $cat = MatCat::fake_sigma(Integers);
                $body
            }
            InstanceSpec::FakeSigma(RingSpec::Rationals) => {
                let $cat = MatCat::fake_sigma(Rationals);
                $body
            }
            InstanceSpec::FakeSigma(RingSpec::Mod(n)) => {
                let $cat = MatCat::fake_sigma(IntMod::new(*n).expect("validated modulus"));
                $body
            }
            InstanceSpec::Shift { group, group_name, ring: RingSpec::Integers } => {
                let $cat = ShiftCat::new(group.clone(), group_name.clone(), Integers);
                $body
            }
            InstanceSpec::Shift { group, group_name, ring: RingSpec::Rationals } => {
                let $cat = ShiftCat::new(group.clone(), group_name.clone(), Rationals);
                $body
            }
            InstanceSpec::Shift { group, group_name, ring: RingSpec::Mod(n) } => {
                let $cat = ShiftCat::new(group.clone(), group_name.clone(), IntMod::new(*n).expect("validated modulus"));
                $body
            }
        }
    }};
}
