use std::collections::BTreeMap;
use std::sync::Arc;

use super::morphism::ControlledMorphism;
use super::object::ControlledObject;
use crate::additive::AdditiveCategory;
use crate::coarse::SpaceMorphism;
use crate::error::ControlledError;
use crate::set::Point;

/// Support points of `m` over each image point, both in point order.
pub fn fibers_over<A: AdditiveCategory>(f: &SpaceMorphism, m: &ControlledObject<A>) -> BTreeMap<Point, Vec<Point>> {
    let mut out: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    for x in m.support() {
        out.entry(f.apply(x)).or_default().push(x.clone());
    }
    out
}

fn fiber_objs<A: AdditiveCategory>(m: &ControlledObject<A>, xs: &[Point]) -> Vec<A::Obj> {
    xs.iter().map(|x| m.fiber(x).expect("support point").clone()).collect()
}

/// `f_*M`: fiber over `y` is the biproduct of `M(x)` for `x ∈ f⁻¹(y)` in
/// point order, and `f_*ρ(g)_y` is assembled blockwise from the `ρ(g)_x`.
pub fn pushforward_obj<A: AdditiveCategory>(cat: &A, f: &SpaceMorphism, m: &ControlledObject<A>) -> ControlledObject<A> {
    let over = fibers_over(f, m);
    let space = f.dst().clone();
    let group = space.group().clone();
    let action = space.action();
    let fibers: BTreeMap<Point, A::Obj> = over.iter().map(|(y, xs)| (y.clone(), cat.sum_obj(&fiber_objs(m, xs)))).collect();
    let mut rho = vec![BTreeMap::new(); group.order()];
    for g in group.elements() {
        let ginv = group.inv(g);
        for (y, xs) in &over {
            let ys = &over[&action.act(ginv, y)];
            let sources = fiber_objs(m, xs);
            let targets: Vec<A::Obj> = fiber_objs(m, ys).iter().map(|a| cat.act_obj(g, a)).collect();
            let block = cat.matrix_from_blocks(&targets, &sources, &mut |i, j| {
                (m.pull(g, &xs[j]) == ys[i]).then(|| m.rho(g, &xs[j]).expect("validated object").clone())
            });
            rho[g.index()].insert(y.clone(), block);
        }
    }
    ControlledObject::from_parts(cat, space, fibers, rho)
}

/// `f_*φ` between already computed pushforwards of its source and target.
pub fn pushforward_mor_between<A: AdditiveCategory>(
    cat: &A,
    f: &SpaceMorphism,
    phi: &ControlledMorphism<A>,
    fm: Arc<ControlledObject<A>>,
    fn_: Arc<ControlledObject<A>>,
) -> ControlledMorphism<A> {
    let src_over = fibers_over(f, phi.src());
    let dst_over = fibers_over(f, phi.dst());
    let mut entries = BTreeMap::new();
    let mut touched: BTreeMap<(Point, Point), ()> = BTreeMap::new();
    for (to, from) in phi.entries().keys() {
        touched.insert((f.apply(to), f.apply(from)), ());
    }
    for (y1, y0) in touched.keys() {
        let xs0 = &src_over[y0];
        let xs1 = &dst_over[y1];
        let block = cat.matrix_from_blocks(&fiber_objs(phi.dst(), xs1), &fiber_objs(phi.src(), xs0), &mut |i, j| {
            phi.entries().get(&(xs1[i].clone(), xs0[j].clone())).cloned()
        });
        entries.insert((y1.clone(), y0.clone()), block);
    }
    ControlledMorphism::from_parts(cat, fm, fn_, entries)
}

pub fn pushforward_mor<A: AdditiveCategory>(cat: &A, f: &SpaceMorphism, phi: &ControlledMorphism<A>) -> ControlledMorphism<A> {
    let fm = Arc::new(pushforward_obj(cat, f, phi.src()));
    let fn_ = if Arc::ptr_eq(phi.src(), phi.dst()) {
        fm.clone()
    } else {
        Arc::new(pushforward_obj(cat, f, phi.dst()))
    };
    pushforward_mor_between(cat, f, phi, fm, fn_)
}

/// The canonical block permutation `(g∘f)_*M → g_*(f_*M)`. Both sides have
/// the same summands over each point; they only differ in how the chosen
/// biproducts order and nest them.
pub fn reassociate<A: AdditiveCategory>(
    cat: &A,
    f: &SpaceMorphism,
    g: &SpaceMorphism,
    m: &ControlledObject<A>,
) -> Result<ControlledMorphism<A>, ControlledError> {
    let gf = g.compose(f)?;
    let flat = Arc::new(pushforward_obj(cat, &gf, m));
    let fm = pushforward_obj(cat, f, m);
    let nested = Arc::new(pushforward_obj(cat, g, &fm));
    let over_f = fibers_over(f, m);
    let over_g = fibers_over(g, &fm);
    let mut entries = BTreeMap::new();
    for (z, ys) in &over_g {
        let flat_xs: Vec<Point> = ys.iter().flat_map(|y| over_f[y].iter().cloned()).collect();
        let mut sorted = flat_xs.clone();
        sorted.sort();
        let nested_objs = fiber_objs(&fm, ys);
        // Map each flat summand to its slot inside the nested biproduct.
        let mut block = cat.zero(flat.fiber(z).expect("flat fiber"), nested.fiber(z).expect("nested fiber"));
        for (j, x) in sorted.iter().enumerate() {
            let yi = ys.iter().position(|y| over_f[y].contains(x)).expect("x lies over some y");
            let inner = &over_f[&ys[yi]];
            let k = inner.iter().position(|p| p == x).expect("x in its fiber");
            let inner_objs = fiber_objs(m, inner);
            let into_nested = cat.compose(&cat.injection(&nested_objs, yi), &cat.injection(&inner_objs, k));
            let from_flat = cat.projection(&fiber_objs(m, &sorted), j);
            block = cat.add(&block, &cat.compose(&into_nested, &from_flat));
        }
        entries.insert((z.clone(), z.clone()), block);
    }
    Ok(ControlledMorphism::from_parts(cat, flat, nested, entries))
}
