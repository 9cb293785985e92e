use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::additive::AdditiveCategory;
use crate::coarse::BornCoarseSpace;
use crate::error::{AlgebraError, ControlledError, SpaceError};
use crate::group::GroupElem;
use crate::set::Point;

/// An equivariant controlled object with finite support, stored pointwise:
/// a nonzero fiber `M(x)` for each support point and, for every group
/// element `g`, isomorphisms `ρ(g)_x : M(x) → g·M(g⁻¹x)`.
pub struct ControlledObject<A: AdditiveCategory> {
    space: Arc<BornCoarseSpace>,
    fibers: BTreeMap<Point, A::Obj>,
    rho: Vec<BTreeMap<Point, A::Mor>>,
}

impl<A: AdditiveCategory> Clone for ControlledObject<A> {
    fn clone(&self) -> Self {
        ControlledObject {
            space: self.space.clone(),
            fibers: self.fibers.clone(),
            rho: self.rho.clone(),
        }
    }
}

impl<A: AdditiveCategory> fmt::Debug for ControlledObject<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlledObject")
            .field("fibers", &self.fibers)
            .field("rho", &self.rho)
            .finish()
    }
}

impl<A: AdditiveCategory> PartialEq for ControlledObject<A> {
    fn eq(&self, other: &Self) -> bool {
        self.fibers == other.fibers
            && self.rho == other.rho
            && (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
    }
}

pub(crate) fn show(space: &BornCoarseSpace, p: &Point) -> String {
    space.ambient().render(p).to_string()
}

impl<A: AdditiveCategory> ControlledObject<A> {
    /// Builds an object without validation. Zero fibers are dropped.
    pub fn from_parts(
        cat: &A,
        space: Arc<BornCoarseSpace>,
        fibers: BTreeMap<Point, A::Obj>,
        mut rho: Vec<BTreeMap<Point, A::Mor>>,
    ) -> Self {
        let fibers: BTreeMap<Point, A::Obj> = fibers.into_iter().filter(|(_, a)| !cat.is_zero_obj(a)).collect();
        for per_g in &mut rho {
            per_g.retain(|x, _| fibers.contains_key(x));
        }
        ControlledObject { space, fibers, rho }
    }

    pub fn zero(space: Arc<BornCoarseSpace>) -> Self {
        let n = space.group().order();
        ControlledObject {
            space,
            fibers: BTreeMap::new(),
            rho: vec![BTreeMap::new(); n],
        }
    }

    pub fn space(&self) -> &Arc<BornCoarseSpace> {
        &self.space
    }

    pub fn fibers(&self) -> &BTreeMap<Point, A::Obj> {
        &self.fibers
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> + Clone {
        self.fibers.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.is_empty()
    }

    pub fn fiber(&self, x: &Point) -> Option<&A::Obj> {
        self.fibers.get(x)
    }

    /// `M(x)`, or the zero object off the support.
    pub fn fiber_or_zero(&self, cat: &A, x: &Point) -> A::Obj {
        self.fibers.get(x).cloned().unwrap_or_else(|| cat.zero_obj())
    }

    pub fn rho(&self, g: GroupElem, x: &Point) -> Option<&A::Mor> {
        self.rho.get(g.index())?.get(x)
    }

    pub fn rho_table(&self) -> &[BTreeMap<Point, A::Mor>] {
        &self.rho
    }

    /// `g⁻¹·x`.
    pub fn pull(&self, g: GroupElem, x: &Point) -> Point {
        let group = self.space.group();
        self.space.action().act(group.inv(g), x)
    }

    /// Re-runs [`obj_check`] on this object's data.
    pub fn recheck(&self, cat: &A) -> Result<(), ControlledError> {
        obj_check(cat, self.space.clone(), self.fibers.clone(), self.rho.clone()).map(|_| ())
    }

    pub fn to_json(&self, cat: &A) -> Value {
        let group = self.space.group();
        let fibers: Vec<Value> = self
            .fibers
            .iter()
            .map(|(x, a)| json!({"point": self.space.ambient().render(x), "fiber": cat.obj_to_json(a)}))
            .collect();
        let mut rho = Vec::new();
        for g in group.elements() {
            for (x, m) in &self.rho[g.index()] {
                rho.push(json!({
                    "g": group.label(g),
                    "point": self.space.ambient().render(x),
                    "matrix": cat.mor_to_json(m),
                }));
            }
        }
        json!({"fibers": fibers, "rho": rho})
    }

    /// Reads the sparse table written by [`ControlledObject::to_json`].
    /// Missing `rho` entries default to identities, which is right for
    /// fixed points of the trivial twist.
    pub fn parse_parts(
        cat: &A,
        space: &BornCoarseSpace,
        v: &Value,
    ) -> Result<(BTreeMap<Point, A::Obj>, Vec<BTreeMap<Point, A::Mor>>), String> {
        let amb = space.ambient();
        let group = space.group();
        let mut fibers = BTreeMap::new();
        for rec in v.get("fibers").and_then(Value::as_array).ok_or("object without fibers")? {
            let x = amb.parse(rec.get("point").ok_or("fiber without point")?).map_err(|e| e.to_string())?;
            let a = cat
                .obj_from_json(rec.get("fiber").ok_or("fiber record without fiber")?)
                .ok_or("malformed fiber")?;
            fibers.insert(x, a);
        }
        let mut rho: Vec<BTreeMap<Point, A::Mor>> = vec![BTreeMap::new(); group.order()];
        if let Some(recs) = v.get("rho").and_then(Value::as_array) {
            for rec in recs {
                let label = rec.get("g").and_then(Value::as_str).ok_or("rho record without g")?;
                let g = group.element(label).ok_or_else(|| format!("unknown group element {label:?}"))?;
                let x = amb.parse(rec.get("point").ok_or("rho record without point")?).map_err(|e| e.to_string())?;
                let m = cat
                    .mor_from_json(rec.get("matrix").ok_or("rho record without matrix")?)
                    .ok_or("malformed rho matrix")?;
                rho[g.index()].insert(x, m);
            }
        }
        for g in group.elements() {
            for (x, a) in &fibers {
                if !rho[g.index()].contains_key(x) && space.action().act(g, x) == *x && cat.act_obj(g, a) == *a {
                    rho[g.index()].insert(x.clone(), cat.identity(a));
                }
            }
        }
        Ok((fibers, rho))
    }
}

/// Validates a candidate object: support invariance, the shape of every
/// `ρ(g)_x`, invertibility, and the cocycle condition
/// `ρ(gg′)_x = g(ρ(g′)_{g⁻¹x}) ∘ ρ(g)_x`.
pub fn obj_check<A: AdditiveCategory>(
    cat: &A,
    space: Arc<BornCoarseSpace>,
    fibers: BTreeMap<Point, A::Obj>,
    rho: Vec<BTreeMap<Point, A::Mor>>,
) -> Result<ControlledObject<A>, ControlledError> {
    let group = space.group().clone();
    if !cat.acts_with(&group) {
        return Err(AlgebraError::GroupMismatch.into());
    }
    if rho.len() != group.order() {
        return Err(AlgebraError::ShapeMismatch("rho must have one table per group element".into()).into());
    }
    for x in fibers.keys() {
        if !space.ambient().contains(x) {
            return Err(SpaceError::ShapeMismatch(format!("point {x} is not in the space")).into());
        }
    }
    let obj = ControlledObject::from_parts(cat, space.clone(), fibers, rho);
    let action = space.action();
    for g in group.elements() {
        for x in obj.fibers.keys() {
            if !obj.fibers.contains_key(&action.act(g, x)) {
                return Err(ControlledError::SupportNotInvariant(show(&space, x)));
            }
        }
    }
    for g in group.elements() {
        for (x, a) in &obj.fibers {
            let shape_err = || ControlledError::RhoShape {
                g: group.label(g).to_string(),
                point: show(&space, x),
            };
            let r = obj.rho(g, x).ok_or_else(shape_err)?;
            let expected_target = cat.act_obj(g, &obj.fibers[&obj.pull(g, x)]);
            if cat.source(r) != *a || cat.target(r) != expected_target {
                return Err(shape_err());
            }
            if cat.inverse(r).is_none() {
                return Err(ControlledError::NotInvertible {
                    g: group.label(g).to_string(),
                    point: show(&space, x),
                });
            }
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            for x in obj.fibers.keys() {
                let rg = &obj.rho[g.index()][x];
                let rh = &obj.rho[h.index()][&obj.pull(g, x)];
                let rhs = cat.compose(&cat.act_mor(g, rh), rg);
                if obj.rho[gh.index()][x] != rhs {
                    return Err(ControlledError::CocycleViolation {
                        g: group.label(g).to_string(),
                        h: group.label(h).to_string(),
                        point: show(&space, x),
                    });
                }
            }
        }
    }
    Ok(obj)
}

/// The `n`-fold biproduct of objects on one space: fiber `x ↦ ⊕ M_i(x)`
/// over the union of the supports, `ρ` block diagonal.
pub fn obj_biproduct<A: AdditiveCategory>(
    cat: &A,
    objs: &[&ControlledObject<A>],
) -> Result<ControlledObject<A>, ControlledError> {
    let space = objs
        .first()
        .map(|m| m.space.clone())
        .ok_or_else(|| AlgebraError::ShapeMismatch("empty biproduct".into()))?;
    if objs.iter().any(|m| *m.space != *space) {
        return Err(AlgebraError::ShapeMismatch("biproduct of objects on different spaces".into()).into());
    }
    let group = space.group().clone();
    let points: std::collections::BTreeSet<Point> = objs.iter().flat_map(|m| m.fibers.keys().cloned()).collect();
    let fibers: BTreeMap<Point, A::Obj> = points
        .iter()
        .map(|x| {
            let parts: Vec<A::Obj> = objs.iter().map(|m| m.fiber_or_zero(cat, x)).collect();
            (x.clone(), cat.sum_obj(&parts))
        })
        .collect();
    let mut rho = vec![BTreeMap::new(); group.order()];
    for g in group.elements() {
        for x in &points {
            let y = objs[0].pull(g, x);
            let sources: Vec<A::Obj> = objs.iter().map(|m| m.fiber_or_zero(cat, x)).collect();
            let targets: Vec<A::Obj> = objs.iter().map(|m| cat.act_obj(g, &m.fiber_or_zero(cat, &y))).collect();
            let block = cat.matrix_from_blocks(&targets, &sources, &mut |i, j| {
                (i == j).then(|| objs[i].rho(g, x).cloned()).flatten()
            });
            rho[g.index()].insert(x.clone(), block);
        }
    }
    Ok(ControlledObject::from_parts(cat, space, fibers, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::MatCat;
    use crate::coarse::{Bornology, CoarseStructure};
    use crate::group::{ActionKind, FiniteGroup, GAction};
    use crate::matrix::Matrix;
    use crate::ring::Integers;
    use crate::set::AmbientSet;
    use num_bigint::BigInt;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn scalar(n: i64) -> Matrix<BigInt> {
        Matrix::from_vec(1, 1, vec![BigInt::from(n)])
    }

    fn swap_space() -> Arc<BornCoarseSpace> {
        let action = GAction::check(
            z2(),
            AmbientSet::finite(["a", "b"]).unwrap(),
            ActionKind::Table(vec![vec![0, 1], vec![1, 0]]),
        )
        .unwrap();
        Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
    }

    fn fixed_point_space() -> Arc<BornCoarseSpace> {
        let action = GAction::trivial(z2(), AmbientSet::finite(["x"]).unwrap());
        Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
    }

    fn line_negation() -> Arc<BornCoarseSpace> {
        let action = GAction::check(z2(), AmbientSet::IntLine, ActionKind::Affine(vec![(1, 0), (-1, 0)])).unwrap();
        Arc::new(BornCoarseSpace::new(CoarseStructure::metric(&action).unwrap(), Bornology::FiniteSubsets).unwrap())
    }

    fn one_point_obj(space: Arc<BornCoarseSpace>, x: Point, twist: i64) -> Result<ControlledObject<MatCat<Integers>>, ControlledError> {
        let cat = MatCat::new(Integers);
        let fibers = BTreeMap::from([(x.clone(), 1)]);
        let rho = vec![BTreeMap::from([(x.clone(), scalar(1))]), BTreeMap::from([(x, scalar(twist))])];
        obj_check(&cat, space, fibers, rho)
    }

    #[test]
    fn free_orbit_with_identity_twists() {
        let cat = MatCat::new(Integers);
        let (a, b) = (Point::Label(0), Point::Label(1));
        let fibers = BTreeMap::from([(a.clone(), 1), (b.clone(), 1)]);
        let ids = BTreeMap::from([(a, scalar(1)), (b, scalar(1))]);
        assert!(obj_check(&cat, swap_space(), fibers, vec![ids.clone(), ids]).is_ok());
    }

    #[test]
    fn sign_twist_is_a_cocycle_but_two_is_not_invertible() {
        assert!(one_point_obj(fixed_point_space(), Point::Label(0), -1).is_ok());
        let err = one_point_obj(fixed_point_space(), Point::Label(0), 2).unwrap_err();
        assert_eq!(err.class(), "NotInvertible");
    }

    #[test]
    fn twist_squaring_to_minus_one_breaks_the_cocycle() {
        let cat = MatCat::new(Integers);
        let x = Point::Label(0);
        // [[0,-1],[1,0]] squares to -1, not to the identity.
        let j = Matrix::from_vec(2, 2, [0, -1, 1, 0].map(BigInt::from).to_vec());
        let rho = vec![
            BTreeMap::from([(x.clone(), Matrix::identity(&Integers, 2))]),
            BTreeMap::from([(x.clone(), j)]),
        ];
        let err = obj_check(&cat, fixed_point_space(), BTreeMap::from([(x, 2)]), rho).unwrap_err();
        assert_eq!(err.class(), "CocycleViolation");
    }

    #[test]
    fn support_on_the_line_must_be_symmetric() {
        assert!(one_point_obj(line_negation(), Point::Int(0), 1).is_ok());
        let err = one_point_obj(line_negation(), Point::Int(1), 1).unwrap_err();
        assert_eq!(err.class(), "SupportNotInvariant");
    }

    #[test]
    fn biproduct_of_rank_one_objects_has_rank_two() {
        let cat = MatCat::new(Integers);
        let m = one_point_obj(fixed_point_space(), Point::Label(0), -1).unwrap();
        let n = one_point_obj(fixed_point_space(), Point::Label(0), 1).unwrap();
        let s = obj_biproduct(&cat, &[&m, &n]).unwrap();
        assert_eq!(s.fiber(&Point::Label(0)), Some(&2));
        s.recheck(&cat).unwrap();
    }
}
