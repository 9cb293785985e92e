//! The total category over all spaces: objects are controlled objects on
//! some space, a morphism `(X, M) → (X′, M′)` is a space morphism
//! `f : X → X′` together with `φ : f_*M → M′`.
//!
//! Morphisms are stored by their blocks `φ_{x₁,x₀} : M(x₀) → M′(x₁)`, one
//! for each source support point, rather than by the assembled matrix on
//! `f_*M`. The two forms determine each other; the block form does not
//! depend on how the biproducts in `f_*M` are ordered, which makes
//! composition strictly associative.

mod exchange;
mod lift;
mod monoidal;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::additive::AdditiveCategory;
use crate::coarse::{Entourage, MapTerm, SpaceMorphism};
use crate::controlled::{
    fibers_over, mor_check, parse_entry_table, pushforward_obj, show, ControlledMorphism, ControlledObject,
};
use crate::error::{AlgebraError, ControlledError};
use crate::set::Point;

pub use exchange::{bi_additivity_map, exchange_map, Side};
pub use lift::{cocartesian_lift, cocartesian_verify};
pub use monoidal::{constraint_assoc, constraint_symm, constraint_unit, mor_tensor, obj_tensor, unit_object};

/// Objects of the total category are controlled objects (each knows its
/// space).
pub type GrothObject<A> = ControlledObject<A>;

pub struct GrothMorphism<A: AdditiveCategory> {
    src: Arc<GrothObject<A>>,
    dst: Arc<GrothObject<A>>,
    map: SpaceMorphism,
    entries: BTreeMap<(Point, Point), A::Mor>,
    witness: Entourage,
}

impl<A: AdditiveCategory> Clone for GrothMorphism<A> {
    fn clone(&self) -> Self {
        GrothMorphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            map: self.map.clone(),
            entries: self.entries.clone(),
            witness: self.witness.clone(),
        }
    }
}

impl<A: AdditiveCategory> fmt::Debug for GrothMorphism<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrothMorphism")
            .field("map", &self.map.to_string())
            .field("entries", &self.entries)
            .finish()
    }
}

impl<A: AdditiveCategory> PartialEq for GrothMorphism<A> {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && self.entries == other.entries
            && (Arc::ptr_eq(&self.src, &other.src) || self.src == other.src)
            && (Arc::ptr_eq(&self.dst, &other.dst) || self.dst == other.dst)
    }
}

fn same<A: AdditiveCategory>(a: &Arc<GrothObject<A>>, b: &Arc<GrothObject<A>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<A: AdditiveCategory> GrothMorphism<A> {
    /// Builds a morphism from blocks without validation.
    pub fn from_parts(
        cat: &A,
        map: SpaceMorphism,
        src: Arc<GrothObject<A>>,
        dst: Arc<GrothObject<A>>,
        entries: BTreeMap<(Point, Point), A::Mor>,
    ) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().filter(|(_, m)| !cat.is_zero(m)).collect();
        let hull = entries.keys().map(|(x1, x0)| (x1.clone(), map.apply(x0))).collect();
        let witness = if entries.is_empty() {
            Entourage::Diagonal
        } else {
            Entourage::FinitePairs(crate::coarse::entourage::saturate_pairs(dst.space().action(), &hull))
        };
        GrothMorphism {
            src,
            dst,
            map,
            entries,
            witness,
        }
    }

    pub fn src(&self) -> &Arc<GrothObject<A>> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<GrothObject<A>> {
        &self.dst
    }

    /// The underlying space morphism; this is the projection to spaces.
    pub fn map(&self) -> &SpaceMorphism {
        &self.map
    }

    pub fn entries(&self) -> &BTreeMap<(Point, Point), A::Mor> {
        &self.entries
    }

    pub fn witness(&self) -> &Entourage {
        &self.witness
    }

    pub fn entry(&self, cat: &A, to: &Point, from: &Point) -> A::Mor {
        self.entries
            .get(&(to.clone(), from.clone()))
            .cloned()
            .unwrap_or_else(|| cat.zero(&self.src.fiber_or_zero(cat, from), &self.dst.fiber_or_zero(cat, to)))
    }

    /// The assembled controlled morphism `f_*M → M′`.
    pub fn assembled(&self, cat: &A) -> ControlledMorphism<A> {
        let fm = Arc::new(pushforward_obj(cat, &self.map, &self.src));
        self.assembled_from(cat, fm)
    }

    fn assembled_from(&self, cat: &A, fm: Arc<ControlledObject<A>>) -> ControlledMorphism<A> {
        let over = fibers_over(&self.map, &self.src);
        let mut rows: BTreeMap<(Point, Point), ()> = BTreeMap::new();
        for (x1, x0) in self.entries.keys() {
            rows.insert((x1.clone(), self.map.apply(x0)), ());
        }
        let mut entries = BTreeMap::new();
        for (x1, y) in rows.keys() {
            let xs = &over[y];
            let sources: Vec<A::Obj> = xs.iter().map(|x| self.src.fiber(x).unwrap().clone()).collect();
            let target = [self.dst.fiber(x1).unwrap().clone()];
            let block = cat.matrix_from_blocks(&target, &sources, &mut |_, j| self.entries.get(&(x1.clone(), xs[j].clone())).cloned());
            entries.insert((x1.clone(), y.clone()), block);
        }
        ControlledMorphism::from_parts(cat, fm, self.dst.clone(), entries)
    }

    /// Inverse of [`GrothMorphism::assembled`].
    pub fn from_assembled(
        cat: &A,
        map: SpaceMorphism,
        src: Arc<GrothObject<A>>,
        phi: &ControlledMorphism<A>,
    ) -> Self {
        let over = fibers_over(&map, &src);
        let mut entries = BTreeMap::new();
        for ((x1, y), m) in phi.entries() {
            let xs = &over[y];
            let sources: Vec<A::Obj> = xs.iter().map(|x| src.fiber(x).unwrap().clone()).collect();
            let target = [phi.dst().fiber(x1).unwrap().clone()];
            for (j, x0) in xs.iter().enumerate() {
                entries.insert((x1.clone(), x0.clone()), cat.block(&target, &sources, m, 0, j));
            }
        }
        GrothMorphism::from_parts(cat, map, src, phi.dst().clone(), entries)
    }

    pub fn recheck(&self, cat: &A) -> Result<(), ControlledError> {
        groth_check(cat, self.map.clone(), self.src.clone(), self.dst.clone(), self.entries.clone()).map(|_| ())
    }

    pub fn to_json(&self, cat: &A) -> Value {
        let (to_amb, from_amb) = (self.dst.space().ambient(), self.src.space().ambient());
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|((to, from), m)| json!({"to": to_amb.render(to), "from": from_amb.render(from), "matrix": cat.mor_to_json(m)}))
            .collect();
        json!({
            "map": self.map.term().to_json(self.src.space().ambient(), self.dst.space().ambient()),
            "entries": entries,
        })
    }

    /// Reads `{"map": ..., "entries": [...]}` between two known objects.
    pub fn parse(cat: &A, src: Arc<GrothObject<A>>, dst: Arc<GrothObject<A>>, v: &Value) -> Result<Self, String> {
        let term = MapTerm::parse(v.get("map").ok_or("morphism without map")?, src.space().ambient(), dst.space().ambient())?;
        let map = crate::coarse::morphism_check(term, src.space().clone(), dst.space().clone()).map_err(|e| e.to_string())?;
        let entries = parse_entry_table(cat, dst.space(), src.space(), v)?;
        Ok(GrothMorphism::from_parts(cat, map, src, dst, entries))
    }
}

/// Validates a candidate `(f, φ)`: `f` runs between the two spaces, every
/// block has the right shape, and the assembled `φ : f_*M → M′` passes
/// [`mor_check`].
pub fn groth_check<A: AdditiveCategory>(
    cat: &A,
    map: SpaceMorphism,
    src: Arc<GrothObject<A>>,
    dst: Arc<GrothObject<A>>,
    entries: BTreeMap<(Point, Point), A::Mor>,
) -> Result<GrothMorphism<A>, ControlledError> {
    if **map.src() != **src.space() || **map.dst() != **dst.space() {
        return Err(AlgebraError::ShapeMismatch("space morphism does not match the objects".into()).into());
    }
    for ((x1, x0), m) in &entries {
        let ok = match (src.fiber(x0), dst.fiber(x1)) {
            (Some(a), Some(b)) => cat.source(m) == *a && cat.target(m) == *b,
            _ => cat.is_zero(m),
        };
        if !ok {
            return Err(ControlledError::EntryShape {
                to: show(dst.space(), x1),
                from: show(src.space(), x0),
            });
        }
    }
    let mut m = GrothMorphism::from_parts(cat, map, src, dst, entries);
    let fm = Arc::new(pushforward_obj(cat, &m.map, &m.src));
    let assembled = m.assembled_from(cat, fm);
    let checked = mor_check(cat, assembled.src().clone(), assembled.dst().clone(), assembled.entries().clone())?;
    m.witness = checked.witness().clone();
    Ok(m)
}

pub fn groth_identity<A: AdditiveCategory>(cat: &A, p: &Arc<GrothObject<A>>) -> GrothMorphism<A> {
    let entries = p.fibers().iter().map(|(x, a)| ((x.clone(), x.clone()), cat.identity(a))).collect();
    GrothMorphism::from_parts(cat, SpaceMorphism::identity(p.space().clone()), p.clone(), p.clone(), entries)
}

/// `(f′, φ′) ∘ (f, φ) = (f′∘f, φ′ ∘ f′_*φ)`; in block form the composite
/// block at `(x₂, x₀)` is `Σ_{x₁} φ′_{x₂,x₁} ∘ φ_{x₁,x₀}`.
pub fn groth_compose<A: AdditiveCategory>(
    cat: &A,
    second: &GrothMorphism<A>,
    first: &GrothMorphism<A>,
) -> Result<GrothMorphism<A>, ControlledError> {
    if !same(&first.dst, &second.src) {
        return Err(ControlledError::NotComposable);
    }
    let map = second.map.compose(&first.map)?;
    let mut by_middle: BTreeMap<&Point, Vec<(&Point, &A::Mor)>> = BTreeMap::new();
    for ((mid, from), m) in &first.entries {
        by_middle.entry(mid).or_default().push((from, m));
    }
    let mut out: BTreeMap<(Point, Point), A::Mor> = BTreeMap::new();
    for ((to, mid), p) in &second.entries {
        for (from, f) in by_middle.get(mid).into_iter().flatten() {
            let term = cat.compose(p, f);
            let key = (to.clone(), (*from).clone());
            let next = match out.remove(&key) {
                Some(acc) => cat.add(&acc, &term),
                None => term,
            };
            out.insert(key, next);
        }
    }
    Ok(GrothMorphism::from_parts(cat, map, first.src.clone(), second.dst.clone(), out))
}

/// Sum of two morphisms over the same space morphism.
pub fn groth_add<A: AdditiveCategory>(
    cat: &A,
    a: &GrothMorphism<A>,
    b: &GrothMorphism<A>,
) -> Result<GrothMorphism<A>, ControlledError> {
    if a.map != b.map || !same(&a.src, &b.src) || !same(&a.dst, &b.dst) {
        return Err(AlgebraError::ShapeMismatch("summands lie over different data".into()).into());
    }
    let mut out = a.entries.clone();
    for (k, m) in &b.entries {
        let next = match out.remove(k) {
            Some(acc) => cat.add(&acc, m),
            None => m.clone(),
        };
        out.insert(k.clone(), next);
    }
    Ok(GrothMorphism::from_parts(cat, a.map.clone(), a.src.clone(), a.dst.clone(), out))
}

pub fn groth_negate<A: AdditiveCategory>(cat: &A, a: &GrothMorphism<A>) -> GrothMorphism<A> {
    let entries = a.entries.iter().map(|(k, m)| (k.clone(), cat.neg(m))).collect();
    GrothMorphism::from_parts(cat, a.map.clone(), a.src.clone(), a.dst.clone(), entries)
}
