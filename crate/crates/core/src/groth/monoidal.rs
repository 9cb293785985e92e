use std::collections::BTreeMap;
use std::sync::Arc;

use super::{GrothMorphism, GrothObject};
use crate::additive::AdditiveCategory;
use crate::coarse::{morphism_check, space_tensor, BornCoarseSpace, MapTerm};
use crate::error::ControlledError;
use crate::group::FiniteGroup;
use crate::set::Point;

/// `1 = (∗, 1_A)` with `ρ(g) = ε^g`.
pub fn unit_object<A: AdditiveCategory>(cat: &A, group: &Arc<FiniteGroup>) -> GrothObject<A> {
    let space = Arc::new(BornCoarseSpace::point(group.clone()));
    let star = Point::Label(0);
    let fibers = BTreeMap::from([(star.clone(), cat.unit())]);
    let rho = group.elements().map(|g| BTreeMap::from([(star.clone(), cat.epsilon(g))])).collect();
    GrothObject::from_parts(cat, space, fibers, rho)
}

/// `P ⊠ Q` on `X ⊗ Y`: fibers `P(x) ⊗ Q(y)` and
/// `ρ(g)_{(x,y)} = μ^g ∘ (ρ_P(g)_x ⊗ ρ_Q(g)_y)`.
pub fn obj_tensor<A: AdditiveCategory>(
    cat: &A,
    p: &GrothObject<A>,
    q: &GrothObject<A>,
) -> Result<GrothObject<A>, ControlledError> {
    let space = Arc::new(space_tensor(p.space(), q.space())?);
    let group = space.group().clone();
    let mut fibers = BTreeMap::new();
    let mut rho = vec![BTreeMap::new(); group.order()];
    for (x, a) in p.fibers() {
        for (y, b) in q.fibers() {
            let xy = Point::pair(x.clone(), y.clone());
            fibers.insert(xy.clone(), cat.tensor_obj(a, b));
            for g in group.elements() {
                let (px, qy) = (p.pull(g, x), q.pull(g, y));
                let mu = cat.mu(g, p.fiber(&px).unwrap(), q.fiber(&qy).unwrap());
                let both = cat.tensor_mor(p.rho(g, x).unwrap(), q.rho(g, y).unwrap());
                rho[g.index()].insert(xy.clone(), cat.compose(&mu, &both));
            }
        }
    }
    Ok(GrothObject::from_parts(cat, space, fibers, rho))
}

/// `m ⊠ n` over `f ⊗ g`, with blocks `m_{x₁,x₀} ⊗ n_{y₁,y₀}`.
pub fn mor_tensor<A: AdditiveCategory>(
    cat: &A,
    m: &GrothMorphism<A>,
    n: &GrothMorphism<A>,
) -> Result<GrothMorphism<A>, ControlledError> {
    let src = Arc::new(obj_tensor(cat, m.src(), n.src())?);
    let dst = Arc::new(obj_tensor(cat, m.dst(), n.dst())?);
    let map = m.map().tensor_between(n.map(), src.space().clone(), dst.space().clone())?;
    let mut entries = BTreeMap::new();
    for ((x1, x0), a) in m.entries() {
        for ((y1, y0), b) in n.entries() {
            let to = Point::pair(x1.clone(), y1.clone());
            let from = Point::pair(x0.clone(), y0.clone());
            if src.fiber(&from).is_some() && dst.fiber(&to).is_some() {
                entries.insert((to, from), cat.tensor_mor(a, b));
            }
        }
    }
    Ok(GrothMorphism::from_parts(cat, map, src, dst, entries))
}

/// The associator `(P ⊠ Q) ⊠ R → P ⊠ (Q ⊠ R)` over the space associator,
/// with blocks `α_{P(x),Q(y),R(z)}`.
pub fn constraint_assoc<A: AdditiveCategory>(
    cat: &A,
    p: &GrothObject<A>,
    q: &GrothObject<A>,
    r: &GrothObject<A>,
) -> Result<GrothMorphism<A>, ControlledError> {
    let src = Arc::new(obj_tensor(cat, &obj_tensor(cat, p, q)?, r)?);
    let dst = Arc::new(obj_tensor(cat, p, &obj_tensor(cat, q, r)?)?);
    let map = morphism_check(MapTerm::Assoc, src.space().clone(), dst.space().clone())?;
    let mut entries = BTreeMap::new();
    for (x, a) in p.fibers() {
        for (y, b) in q.fibers() {
            for (z, c) in r.fibers() {
                let from = Point::pair(Point::pair(x.clone(), y.clone()), z.clone());
                let to = Point::pair(x.clone(), Point::pair(y.clone(), z.clone()));
                if src.fiber(&from).is_some() && dst.fiber(&to).is_some() {
                    entries.insert((to, from), cat.alpha(a, b, c));
                }
            }
        }
    }
    Ok(GrothMorphism::from_parts(cat, map, src, dst, entries))
}

/// The unitor `1 ⊠ P → P` over the projection `∗ ⊗ X → X`, with blocks
/// `η_{P(x)}`.
pub fn constraint_unit<A: AdditiveCategory>(cat: &A, p: &Arc<GrothObject<A>>) -> Result<GrothMorphism<A>, ControlledError> {
    let one = unit_object(cat, p.space().group());
    let src = Arc::new(obj_tensor(cat, &one, p)?);
    let map = morphism_check(MapTerm::Proj2, src.space().clone(), p.space().clone())?;
    let mut entries = BTreeMap::new();
    for (x, a) in p.fibers() {
        let from = Point::pair(Point::Label(0), x.clone());
        if src.fiber(&from).is_some() {
            entries.insert((x.clone(), from), cat.eta(a));
        }
    }
    Ok(GrothMorphism::from_parts(cat, map, src, p.clone(), entries))
}

/// The symmetry `P ⊠ Q → Q ⊠ P` over the flip, with blocks
/// `σ_{P(x),Q(y)}`.
pub fn constraint_symm<A: AdditiveCategory>(
    cat: &A,
    p: &GrothObject<A>,
    q: &GrothObject<A>,
) -> Result<GrothMorphism<A>, ControlledError> {
    let src = Arc::new(obj_tensor(cat, p, q)?);
    let dst = Arc::new(obj_tensor(cat, q, p)?);
    let map = morphism_check(MapTerm::Swap, src.space().clone(), dst.space().clone())?;
    let mut entries = BTreeMap::new();
    for (x, a) in p.fibers() {
        for (y, b) in q.fibers() {
            let from = Point::pair(x.clone(), y.clone());
            let to = Point::pair(y.clone(), x.clone());
            if src.fiber(&from).is_some() && dst.fiber(&to).is_some() {
                entries.insert((to, from), cat.sigma(a, b));
            }
        }
    }
    Ok(GrothMorphism::from_parts(cat, map, src, dst, entries))
}
