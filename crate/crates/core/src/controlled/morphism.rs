use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::object::{show, ControlledObject};
use crate::additive::AdditiveCategory;
use crate::coarse::entourage::saturate_pairs;
use crate::coarse::{coarse_member, BornCoarseSpace, Entourage, Membership, PairSet};
use crate::error::{AlgebraError, ControlledError, SpaceError};
use crate::set::Point;

/// A controlled equivariant morphism in matrix form: entries
/// `φ_{x′,x} : M(x) → M′(x′)` keyed by `(x′, x)`, zero entries omitted.
/// The witness is the G-saturated support hull.
pub struct ControlledMorphism<A: AdditiveCategory> {
    src: Arc<ControlledObject<A>>,
    dst: Arc<ControlledObject<A>>,
    entries: BTreeMap<(Point, Point), A::Mor>,
    witness: Entourage,
}

impl<A: AdditiveCategory> Clone for ControlledMorphism<A> {
    fn clone(&self) -> Self {
        ControlledMorphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            entries: self.entries.clone(),
            witness: self.witness.clone(),
        }
    }
}

impl<A: AdditiveCategory> fmt::Debug for ControlledMorphism<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlledMorphism").field("entries", &self.entries).finish()
    }
}

impl<A: AdditiveCategory> PartialEq for ControlledMorphism<A> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && (Arc::ptr_eq(&self.src, &other.src) || self.src == other.src)
            && (Arc::ptr_eq(&self.dst, &other.dst) || self.dst == other.dst)
    }
}

pub(crate) fn hull_of<K>(entries: &BTreeMap<(Point, Point), K>) -> PairSet {
    entries.keys().cloned().collect()
}

/// The canonical witness: the saturated hull, or the diagonal when empty.
pub(crate) fn witness_of(space: &BornCoarseSpace, hull: &PairSet) -> Entourage {
    if hull.is_empty() {
        Entourage::Diagonal
    } else {
        Entourage::FinitePairs(saturate_pairs(space.action(), hull))
    }
}

/// Decides whether the saturated hull is an entourage of `space`.
pub(crate) fn check_hull(space: &BornCoarseSpace, hull: &PairSet) -> Result<Entourage, ControlledError> {
    let w = witness_of(space, hull);
    if let Entourage::FinitePairs(pairs) = &w {
        match coarse_member(space.coarse(), pairs) {
            Membership::Member(_) => {}
            Membership::NotMember => {
                let shown: Vec<String> = pairs
                    .iter()
                    .map(|(a, b)| format!("({}, {})", show(space, a), show(space, b)))
                    .collect();
                return Err(ControlledError::HullNotEntourage(shown.join(" ")));
            }
            Membership::SearchBoundExceeded { bound, needed } => {
                return Err(SpaceError::SearchBoundExceeded { bound, needed }.into());
            }
        }
    }
    Ok(w)
}

impl<A: AdditiveCategory> ControlledMorphism<A> {
    /// Builds a morphism without validation; zero entries are dropped and
    /// the witness is recomputed.
    pub fn from_parts(
        cat: &A,
        src: Arc<ControlledObject<A>>,
        dst: Arc<ControlledObject<A>>,
        entries: BTreeMap<(Point, Point), A::Mor>,
    ) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().filter(|(_, m)| !cat.is_zero(m)).collect();
        let witness = witness_of(src.space(), &hull_of(&entries));
        ControlledMorphism {
            src,
            dst,
            entries,
            witness,
        }
    }

    pub fn src(&self) -> &Arc<ControlledObject<A>> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<ControlledObject<A>> {
        &self.dst
    }

    pub fn entries(&self) -> &BTreeMap<(Point, Point), A::Mor> {
        &self.entries
    }

    pub fn witness(&self) -> &Entourage {
        &self.witness
    }

    /// `φ_{x′,x}`, zero when absent.
    pub fn entry(&self, cat: &A, to: &Point, from: &Point) -> A::Mor {
        self.entries
            .get(&(to.clone(), from.clone()))
            .cloned()
            .unwrap_or_else(|| cat.zero(&self.src.fiber_or_zero(cat, from), &self.dst.fiber_or_zero(cat, to)))
    }

    pub fn recheck(&self, cat: &A) -> Result<(), ControlledError> {
        mor_check(cat, self.src.clone(), self.dst.clone(), self.entries.clone()).map(|_| ())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self, cat: &A) -> Value {
        let amb = self.src.space().ambient();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|((to, from), m)| json!({"to": amb.render(to), "from": amb.render(from), "matrix": cat.mor_to_json(m)}))
            .collect();
        json!({"entries": entries})
    }

    pub fn parse_entries(
        cat: &A,
        space: &BornCoarseSpace,
        v: &Value,
    ) -> Result<BTreeMap<(Point, Point), A::Mor>, String> {
        parse_entry_table(cat, space, space, v)
    }
}

pub(crate) fn parse_entry_table<A: AdditiveCategory>(
    cat: &A,
    to_space: &BornCoarseSpace,
    from_space: &BornCoarseSpace,
    v: &Value,
) -> Result<BTreeMap<(Point, Point), A::Mor>, String> {
    let mut out = BTreeMap::new();
    for rec in v.get("entries").and_then(Value::as_array).ok_or("morphism without entries")? {
        let to = to_space
            .ambient()
            .parse(rec.get("to").ok_or("entry without to")?)
            .map_err(|e| e.to_string())?;
        let from = from_space
            .ambient()
            .parse(rec.get("from").ok_or("entry without from")?)
            .map_err(|e| e.to_string())?;
        let m = cat
            .mor_from_json(rec.get("matrix").ok_or("entry without matrix")?)
            .ok_or("malformed entry matrix")?;
        out.insert((to, from), m);
    }
    Ok(out)
}

/// Validates a candidate morphism `src → dst`: entry shapes, the hull as an
/// entourage, and `ρ′(g)_{x′} ∘ φ_{x′,x} = g(φ_{g⁻¹x′,g⁻¹x}) ∘ ρ(g)_x` for all
/// `g` and all support pairs.
pub fn mor_check<A: AdditiveCategory>(
    cat: &A,
    src: Arc<ControlledObject<A>>,
    dst: Arc<ControlledObject<A>>,
    entries: BTreeMap<(Point, Point), A::Mor>,
) -> Result<ControlledMorphism<A>, ControlledError> {
    if *src.space() != *dst.space() {
        return Err(AlgebraError::ShapeMismatch("source and target live on different spaces".into()).into());
    }
    let space = src.space().clone();
    for ((to, from), m) in &entries {
        let ok = match (src.fiber(from), dst.fiber(to)) {
            (Some(a), Some(b)) => cat.source(m) == *a && cat.target(m) == *b,
            _ => cat.is_zero(m),
        };
        if !ok {
            return Err(ControlledError::EntryShape {
                to: show(&space, to),
                from: show(&space, from),
            });
        }
    }
    let mut phi = ControlledMorphism::from_parts(cat, src, dst, entries);
    phi.witness = check_hull(&space, &hull_of(&phi.entries))?;
    let group = space.group();
    for g in group.elements() {
        for x in phi.src.support() {
            let gx = phi.src.pull(g, x);
            let rho = phi.src.rho(g, x).expect("validated source");
            for x1 in phi.dst.support() {
                let gx1 = phi.dst.pull(g, x1);
                let lhs = cat.compose(phi.dst.rho(g, x1).expect("validated target"), &phi.entry(cat, x1, x));
                let rhs = cat.compose(&cat.act_mor(g, &phi.entry(cat, &gx1, &gx)), rho);
                if lhs != rhs {
                    return Err(ControlledError::NotEquivariant {
                        g: group.label(g).to_string(),
                        to: show(&space, x1),
                        from: show(&space, x),
                    });
                }
            }
        }
    }
    Ok(phi)
}

fn same<A: AdditiveCategory>(a: &Arc<ControlledObject<A>>, b: &Arc<ControlledObject<A>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn mor_identity<A: AdditiveCategory>(cat: &A, m: &Arc<ControlledObject<A>>) -> ControlledMorphism<A> {
    let entries = m.fibers().iter().map(|(x, a)| ((x.clone(), x.clone()), cat.identity(a))).collect();
    ControlledMorphism::from_parts(cat, m.clone(), m.clone(), entries)
}

pub fn mor_zero<A: AdditiveCategory>(
    cat: &A,
    src: &Arc<ControlledObject<A>>,
    dst: &Arc<ControlledObject<A>>,
) -> ControlledMorphism<A> {
    ControlledMorphism::from_parts(cat, src.clone(), dst.clone(), BTreeMap::new())
}

/// `ψ ∘ φ` with `(ψ∘φ)_{x″,x} = Σ_{x′} ψ_{x″,x′} ∘ φ_{x′,x}`.
pub fn mor_compose<A: AdditiveCategory>(
    cat: &A,
    psi: &ControlledMorphism<A>,
    phi: &ControlledMorphism<A>,
) -> Result<ControlledMorphism<A>, ControlledError> {
    if !same(&phi.dst, &psi.src) {
        return Err(ControlledError::NotComposable);
    }
    let mut by_middle: BTreeMap<&Point, Vec<(&Point, &A::Mor)>> = BTreeMap::new();
    for ((mid, from), m) in &phi.entries {
        by_middle.entry(mid).or_default().push((from, m));
    }
    let mut out: BTreeMap<(Point, Point), A::Mor> = BTreeMap::new();
    for ((to, mid), p) in &psi.entries {
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
    Ok(ControlledMorphism::from_parts(cat, phi.src.clone(), psi.dst.clone(), out))
}

pub fn mor_add<A: AdditiveCategory>(
    cat: &A,
    phi: &ControlledMorphism<A>,
    psi: &ControlledMorphism<A>,
) -> Result<ControlledMorphism<A>, ControlledError> {
    if !same(&phi.src, &psi.src) || !same(&phi.dst, &psi.dst) {
        return Err(AlgebraError::ShapeMismatch("summands have different source or target".into()).into());
    }
    let mut out = phi.entries.clone();
    for (k, m) in &psi.entries {
        let next = match out.remove(k) {
            Some(acc) => cat.add(&acc, m),
            None => m.clone(),
        };
        out.insert(k.clone(), next);
    }
    Ok(ControlledMorphism::from_parts(cat, phi.src.clone(), phi.dst.clone(), out))
}

pub fn mor_negate<A: AdditiveCategory>(cat: &A, phi: &ControlledMorphism<A>) -> ControlledMorphism<A> {
    let entries = phi.entries.iter().map(|(k, m)| (k.clone(), cat.neg(m))).collect();
    ControlledMorphism::from_parts(cat, phi.src.clone(), phi.dst.clone(), entries)
}

/// Injection `M_j → ⊕ M_i` into an object built by
/// [`obj_biproduct`](super::obj_biproduct) from `parts`.
pub fn biproduct_injection<A: AdditiveCategory>(
    cat: &A,
    parts: &[&ControlledObject<A>],
    sum: &Arc<ControlledObject<A>>,
    part: &Arc<ControlledObject<A>>,
    j: usize,
) -> ControlledMorphism<A> {
    let entries = part
        .support()
        .map(|x| {
            let objs: Vec<A::Obj> = parts.iter().map(|m| m.fiber_or_zero(cat, x)).collect();
            ((x.clone(), x.clone()), cat.injection(&objs, j))
        })
        .collect();
    ControlledMorphism::from_parts(cat, part.clone(), sum.clone(), entries)
}

pub fn biproduct_projection<A: AdditiveCategory>(
    cat: &A,
    parts: &[&ControlledObject<A>],
    sum: &Arc<ControlledObject<A>>,
    part: &Arc<ControlledObject<A>>,
    j: usize,
) -> ControlledMorphism<A> {
    let entries = part
        .support()
        .map(|x| {
            let objs: Vec<A::Obj> = parts.iter().map(|m| m.fiber_or_zero(cat, x)).collect();
            ((x.clone(), x.clone()), cat.projection(&objs, j))
        })
        .collect();
    ControlledMorphism::from_parts(cat, sum.clone(), part.clone(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::MatCat;
    use crate::coarse::{Bornology, CoarseStructure};
    use crate::controlled::obj_check;
    use crate::group::{FiniteGroup, GAction};
    use crate::matrix::Matrix;
    use crate::ring::Integers;
    use crate::set::AmbientSet;
    use num_bigint::BigInt;

    type Cat = MatCat<Integers>;

    fn trivial_obj(space: Arc<BornCoarseSpace>, points: &[Point]) -> Arc<ControlledObject<Cat>> {
        let cat = MatCat::new(Integers);
        let fibers: BTreeMap<Point, usize> = points.iter().map(|p| (p.clone(), 1)).collect();
        let ids: BTreeMap<Point, Matrix<BigInt>> = points.iter().map(|p| (p.clone(), Matrix::identity(&Integers, 1))).collect();
        Arc::new(obj_check(&cat, space, fibers, vec![ids]).unwrap())
    }

    fn discrete_line() -> Arc<BornCoarseSpace> {
        let action = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::IntLine);
        Arc::new(BornCoarseSpace::new(CoarseStructure::discrete(&action), Bornology::FiniteSubsets).unwrap())
    }

    #[test]
    fn zero_morphism_has_diagonal_witness() {
        let cat = MatCat::new(Integers);
        let m = trivial_obj(discrete_line(), &[Point::Int(0), Point::Int(1)]);
        let z = mor_check(&cat, m.clone(), m, BTreeMap::new()).unwrap();
        assert_eq!(*z.witness(), Entourage::Diagonal);
    }

    #[test]
    fn identity_passes_and_off_diagonal_entry_fails_on_discrete_line() {
        let cat = MatCat::new(Integers);
        let m = trivial_obj(discrete_line(), &[Point::Int(0), Point::Int(1)]);
        mor_identity(&cat, &m).recheck(&cat).unwrap();
        let entries = BTreeMap::from([((Point::Int(0), Point::Int(1)), Matrix::identity(&Integers, 1))]);
        let err = mor_check(&cat, m.clone(), m, entries).unwrap_err();
        assert_eq!(err.class(), "HullNotEntourage");
    }

    #[test]
    fn single_entries_compose_to_their_product() {
        let cat = MatCat::new(Integers);
        let action = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::numbered(3));
        let space = Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap());
        let m = trivial_obj(space, &[Point::Label(0), Point::Label(1), Point::Label(2)]);
        let s = |n: i64| Matrix::from_vec(1, 1, vec![BigInt::from(n)]);
        let phi = mor_check(&cat, m.clone(), m.clone(), BTreeMap::from([((Point::Label(1), Point::Label(0)), s(3))])).unwrap();
        let psi = mor_check(&cat, m.clone(), m.clone(), BTreeMap::from([((Point::Label(2), Point::Label(1)), s(5))])).unwrap();
        let c = mor_compose(&cat, &psi, &phi).unwrap();
        assert_eq!(c.entries().len(), 1);
        assert_eq!(c.entry(&cat, &Point::Label(2), &Point::Label(0)), s(15));
        let id = mor_identity(&cat, &m);
        assert_eq!(mor_compose(&cat, &id, &phi).unwrap(), phi);
        assert!(mor_add(&cat, &phi, &mor_negate(&cat, &phi)).unwrap().is_zero());
    }
}
