use std::collections::BTreeMap;
use std::sync::Arc;

use super::monoidal::obj_tensor;
use super::GrothObject;
use crate::additive::AdditiveCategory;
use crate::coarse::SpaceMorphism;
use crate::controlled::{fibers_over, obj_biproduct, pushforward_obj, ControlledMorphism};
use crate::error::ControlledError;
use crate::set::Point;

/// The comparison `(f⊗g)_*(P ⊠ Q) → f_*P ⊠ g_*Q`. Over `(x′, y′)` the
/// summand `P(x) ⊗ Q(y)` is sent into `(⊕ P) ⊗ (⊕ Q)` by `ι_x ⊗ ι_y`.
pub fn exchange_map<A: AdditiveCategory>(
    cat: &A,
    f: &SpaceMorphism,
    g: &SpaceMorphism,
    p: &GrothObject<A>,
    q: &GrothObject<A>,
) -> Result<ControlledMorphism<A>, ControlledError> {
    let pq = obj_tensor(cat, p, q)?;
    let fg = f.tensor(g)?;
    let src = Arc::new(pushforward_obj(cat, &fg, &pq));
    let fp = pushforward_obj(cat, f, p);
    let gq = pushforward_obj(cat, g, q);
    let dst = Arc::new(obj_tensor(cat, &fp, &gq)?);
    let over_src = fibers_over(&fg, &pq);
    let over_p = fibers_over(f, p);
    let over_q = fibers_over(g, q);
    let objs = |m: &GrothObject<A>, xs: &[Point]| -> Vec<A::Obj> { xs.iter().map(|x| m.fiber(x).unwrap().clone()).collect() };
    let mut entries = BTreeMap::new();
    for (xy1, pairs) in &over_src {
        let (x1, y1) = (xy1.first().unwrap(), xy1.second().unwrap());
        let (xs, ys) = (&over_p[x1], &over_q[y1]);
        let (p_objs, q_objs) = (objs(p, xs), objs(q, ys));
        let target = [dst.fiber(xy1).expect("nonzero summand gives nonzero fiber").clone()];
        let block = cat.matrix_from_blocks(&target, &objs(&pq, pairs), &mut |_, j| {
            let (x, y) = (pairs[j].first().unwrap(), pairs[j].second().unwrap());
            let i = xs.iter().position(|p| p == x).unwrap();
            let k = ys.iter().position(|p| p == y).unwrap();
            Some(cat.tensor_mor(&cat.injection(&p_objs, i), &cat.injection(&q_objs, k)))
        });
        entries.insert((xy1.clone(), xy1.clone()), block);
    }
    Ok(ControlledMorphism::from_parts(cat, src, dst, entries))
}

/// Which variable of `⊠` the biproduct sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The comparison `(M₀ ⊠ N) ⊕ (M₁ ⊠ N) → (M₀ ⊕ M₁) ⊠ N` (or its mirror),
/// assembled from `ι_i ⊗ id`.
pub fn bi_additivity_map<A: AdditiveCategory>(
    cat: &A,
    m0: &GrothObject<A>,
    m1: &GrothObject<A>,
    n: &GrothObject<A>,
    side: Side,
) -> Result<ControlledMorphism<A>, ControlledError> {
    let tensor = |a: &GrothObject<A>, b: &GrothObject<A>| match side {
        Side::Left => obj_tensor(cat, a, b),
        Side::Right => obj_tensor(cat, b, a),
    };
    let t0 = tensor(m0, n)?;
    let t1 = tensor(m1, n)?;
    let src = Arc::new(obj_biproduct(cat, &[&t0, &t1])?);
    let sum = obj_biproduct(cat, &[m0, m1])?;
    let dst = Arc::new(tensor(&sum, n)?);
    let mut entries = BTreeMap::new();
    for pt in src.support() {
        let (mx, nx) = match side {
            Side::Left => (pt.first().unwrap(), pt.second().unwrap()),
            Side::Right => (pt.second().unwrap(), pt.first().unwrap()),
        };
        let parts = [m0.fiber_or_zero(cat, mx), m1.fiber_or_zero(cat, mx)];
        let sources = [t0.fiber_or_zero(cat, pt), t1.fiber_or_zero(cat, pt)];
        let id_n = cat.identity(n.fiber(nx).unwrap());
        let target = [dst.fiber(pt).unwrap().clone()];
        let block = cat.matrix_from_blocks(&target, &sources, &mut |_, i| {
            let inj = cat.injection(&parts, i);
            Some(match side {
                Side::Left => cat.tensor_mor(&inj, &id_n),
                Side::Right => cat.tensor_mor(&id_n, &inj),
            })
        });
        entries.insert((pt.clone(), pt.clone()), block);
    }
    Ok(ControlledMorphism::from_parts(cat, src, dst, entries))
}
