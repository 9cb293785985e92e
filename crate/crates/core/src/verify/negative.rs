//! Planted violations. Each case builds a candidate that is wrong in one
//! known way and passes only if the validator rejects it with the expected
//! error class.

use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::additive::{run_instance_law, AdditiveCategory};
use crate::coarse::{space_tensor, BornCoarseSpace, Bornology, CoarseStructure, MapTerm};
use crate::controlled::{mor_check, obj_check, ControlledObject};
use crate::error::{AlgebraError, ControlledError};
use crate::group::{ActionKind, GAction};
use crate::set::{AmbientSet, Point};

use super::fixtures::Shape;
use super::laws::{map_rejection, Breach, Ctx, LawResult};

fn expect_class(got: Option<&str>, want: &str, what: &str) -> LawResult {
    match got {
        Some(c) if c == want => Ok(()),
        Some(c) => Err(Breach::Violation {
            class: "WrongClass".into(),
            message: format!("{what}: expected {want}, got {c}"),
        }),
        None => Err(Breach::Violation {
            class: "Undetected".into(),
            message: format!("{what}: accepted, expected {want}"),
        }),
    }
}

fn line(group: &Arc<crate::group::FiniteGroup>) -> Arc<BornCoarseSpace> {
    Shape::LineMetric.build(group)
}

/// `Proj1 : Z ⊗ Z → Z` with finite bounded sets: the preimage of a point
/// is a whole line.
pub fn non_proper_projection<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let z = line(&cx.group);
    let zz = Arc::new(space_tensor(&z, &z)?);
    let (term, src, dst) = if cx.gen.coin(0.5) {
        (MapTerm::Proj1, zz, z)
    } else {
        (MapTerm::Proj2, zz, z)
    };
    let err = map_rejection(term, src, dst);
    expect_class(err.as_ref().map(|e| e.class()), "NotProper", "projection off the integer plane")
}

/// The integer line with the maximal coarse structure and finite bounded
/// sets: thickening a point gives the whole line.
pub fn incompatible_bornology<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let n = cx.group.order();
    let maps = (0..n).map(|k| if n == 2 && k == 1 { (-1, 0) } else { (1, 0) }).collect();
    let action = GAction::check(cx.group.clone(), AmbientSet::IntLine, ActionKind::Affine(maps))?;
    let result = if cx.gen.coin(0.5) {
        BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::FiniteSubsets)
    } else {
        let whole = BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets)?;
        let finite = Shape::Whole4.build(&cx.group);
        // The product inherits the incompatibility along its second factor.
        let coarse = CoarseStructure::product(finite.coarse(), whole.coarse());
        BornCoarseSpace::new(
            coarse,
            Bornology::Product(Box::new(Bornology::AllSubsets), Box::new(Bornology::FiniteSubsets)),
        )
    };
    let err = result.err();
    expect_class(err.as_ref().map(|e| e.class()), "NotCompatible", "Whole structure on the line")
}

/// An otherwise valid morphism plus one entry between points that no
/// entourage relates.
pub fn off_entourage_entry<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let shape = if cx.gen.coin(0.5) { Shape::Classes6 } else { Shape::LineDiscrete };
    let space = shape.build(&cx.group);
    let m = Arc::new(cx.gen.object(cat, &space, 6, 2));
    let n = Arc::new(cx.gen.object(cat, &space, 6, 2));
    let mut entries = cx.gen.morphism(cat, &m, &n).entries().clone();
    let amb = space.ambient();
    let top = space.coarse().cofinal().at(64);
    let far: Vec<(Point, Point)> = n
        .support()
        .flat_map(|a| m.support().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| !top.contains(amb, a, b))
        .collect();
    let Some((key, bump)) = planted_entry(cx, &m, &n, far) else {
        // No far pair with a nonzero Hom: plant between unit fibers instead.
        return off_entourage_fallback(cx, &space);
    };
    entries.insert(key, bump);
    let err = mor_check(cat, m, n, entries).err();
    expect_class(err.as_ref().map(|e| e.class()), "HullNotEntourage", "entry off every entourage")
}

fn off_entourage_fallback<A: AdditiveCategory>(cx: &mut Ctx<'_, A>, space: &Arc<BornCoarseSpace>) -> LawResult {
    let cat = cx.cat;
    let (a, b) = match space.ambient() {
        AmbientSet::IntLine => (Point::Int(0), Point::Int(1)),
        _ => (Point::Label(0), Point::Label(3)),
    };
    let orbit = |p: &Point| space.action().orbit(p).into_iter().collect::<Vec<_>>();
    let (oa, ob) = (orbit(&a), orbit(&b));
    let one = cat.unit();
    let fibers_a = oa.iter().map(|p| (p.clone(), one.clone())).collect();
    let fibers_b = ob.iter().map(|p| (p.clone(), one.clone())).collect();
    let rho = |pts: &[Point]| -> Vec<_> {
        space
            .group()
            .elements()
            .map(|g| pts.iter().map(|p| (p.clone(), cat.epsilon(g))).collect())
            .collect()
    };
    let m = Arc::new(obj_check(cat, space.clone(), fibers_b, rho(&ob))?);
    let n = Arc::new(obj_check(cat, space.clone(), fibers_a, rho(&oa))?);
    let entries = [((a, b), cat.identity(&one))].into_iter().collect();
    let err = mor_check(cat, m, n, entries).err();
    expect_class(err.as_ref().map(|e| e.class()), "HullNotEntourage", "entry off every entourage")
}

/// A pair from `pairs` with a nonzero morphism between its fibers. Hom
/// sets can vanish (shift objects concentrated in different degrees), so
/// pairs are tried in random order.
fn planted_entry<A: AdditiveCategory>(
    cx: &mut Ctx<'_, A>,
    m: &ControlledObject<A>,
    n: &ControlledObject<A>,
    mut pairs: Vec<(Point, Point)>,
) -> Option<((Point, Point), A::Mor)> {
    pairs.shuffle(cx.gen.rng());
    for (to, from) in pairs {
        let (a, b) = (m.fiber(&from).unwrap(), n.fiber(&to).unwrap());
        for _ in 0..16 {
            let f = cx.cat.random_mor(cx.gen.rng(), a, b);
            if !cx.cat.is_zero(&f) {
                return Some(((to, from), f));
            }
        }
    }
    None
}

/// Some `ρ(g)_x`, `g ≠ e`, is replaced by `ρ(g)_x ∘ T` for an automorphism
/// `T ≠ id`. The planted table is kept only if an independent recomputation
/// of the cocycle equation finds a failing triple.
pub fn broken_cocycle<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let space = cx.primary.build(&cx.group);
    for _ in 0..32 {
        let m = cx.gen.object(cat, &space, 4, 3);
        if m.is_zero() {
            continue;
        }
        let pts: Vec<Point> = m.support().cloned().collect();
        let x = cx.gen.pick(&pts).clone();
        let others: Vec<_> = cx.group.elements().filter(|&g| g != cx.group.unit()).collect();
        let g = *cx.gen.pick(&others);
        let a = m.fiber(&x).unwrap().clone();
        let t = cat.random_auto(cx.gen.rng(), &a);
        if t == cat.identity(&a) {
            continue;
        }
        let mut rho = m.rho_table().to_vec();
        let old = rho[g.index()][&x].clone();
        rho[g.index()].insert(x.clone(), cat.compose(&old, &t));
        if !cocycle_fails(cx, &m, &rho) {
            continue;
        }
        let err = obj_check(cat, space.clone(), m.fibers().clone(), rho).err();
        return expect_class(err.as_ref().map(ControlledError::class), "CocycleViolation", "perturbed rho");
    }
    Err(Breach::Unknown("no perturbation broke the cocycle within the attempt budget".into()))
}

/// Direct recomputation of `ρ(gh)_x = g(ρ(h)_{g⁻¹x}) ∘ ρ(g)_x`.
fn cocycle_fails<A: AdditiveCategory>(
    cx: &Ctx<'_, A>,
    m: &ControlledObject<A>,
    rho: &[std::collections::BTreeMap<Point, A::Mor>],
) -> bool {
    let (cat, group) = (cx.cat, &cx.group);
    let action = m.space().action();
    group.elements().any(|g| {
        group.elements().any(|h| {
            m.support().any(|x| {
                let gx = action.act(group.inv(g), x);
                let rhs = cat.compose(&cat.act_mor(g, &rho[h.index()][&gx]), &rho[g.index()][x]);
                rho[group.mul(g, h).index()][x] != rhs
            })
        })
    })
}

/// A valid morphism with one extra entry on a pair whose orbit has more
/// than one element, so the other entries of the orbit are missing.
pub fn non_equivariant_matrix<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let space = Shape::Whole4.build(&cx.group);
    let action = space.action().clone();
    for _ in 0..32 {
        let m = Arc::new(cx.gen.object(cat, &space, 4, 2));
        let n = Arc::new(cx.gen.object(cat, &space, 4, 2));
        let moving: Vec<(Point, Point)> = n
            .support()
            .flat_map(|a| m.support().map(move |b| (a.clone(), b.clone())))
            .filter(|(a, b)| cx.group.elements().any(|g| action.act(g, a) != *a || action.act(g, b) != *b))
            .collect();
        let mut entries = cx.gen.morphism(cat, &m, &n).entries().clone();
        let Some(((to, from), bump)) = planted_entry(cx, &m, &n, moving) else {
            continue;
        };
        let next = match entries.remove(&(to.clone(), from.clone())) {
            Some(e) => cat.add(&e, &bump),
            None => bump,
        };
        entries.insert((to, from), next);
        let err = mor_check(cat, m, n, entries).err();
        return expect_class(err.as_ref().map(ControlledError::class), "NotEquivariant", "entry off its orbit");
    }
    Err(Breach::Unknown("no moving pair in the sampled supports".into()))
}

/// The instance with `σ = id`: naturality of the symmetry must fail.
pub fn fake_symmetry<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    for _ in 0..64 {
        match run_instance_law(cx.cat, &cx.group, "sigma_natural", cx.gen.rng()) {
            Err(AlgebraError::LawViolation { .. }) => return Ok(()),
            Err(e) => return expect_class(Some(e.class()), "LawViolation", "fake symmetry"),
            Ok(()) => {}
        }
    }
    expect_class(None, "LawViolation", "fake symmetry")
}
