use std::collections::BTreeMap;
use std::sync::Arc;

use super::{groth_check, groth_compose, GrothMorphism, GrothObject};
use crate::additive::AdditiveCategory;
use crate::coarse::SpaceMorphism;
use crate::controlled::{fibers_over, pushforward_obj};
use crate::error::{AlgebraError, ControlledError};

/// `(f, id_{f_*P}) : P → f_*P`. In block form the entry at `(f(x), x)` is
/// the chosen injection of `P(x)` into the fiber biproduct.
pub fn cocartesian_lift<A: AdditiveCategory>(cat: &A, f: &SpaceMorphism, p: &Arc<GrothObject<A>>) -> GrothMorphism<A> {
    let fp = Arc::new(pushforward_obj(cat, f, p));
    let mut entries = BTreeMap::new();
    for (y, xs) in fibers_over(f, p) {
        let objs: Vec<A::Obj> = xs.iter().map(|x| p.fiber(x).unwrap().clone()).collect();
        for (j, x) in xs.iter().enumerate() {
            entries.insert((y.clone(), x.clone()), cat.injection(&objs, j));
        }
    }
    GrothMorphism::from_parts(cat, f.clone(), p.clone(), fp, entries)
}

/// Given the lift over `f`, a test morphism `(h, ψ)` out of the same object
/// and `h′` with `h = h′ ∘ f`, solves for the fill-in `(h′, φ′)`, checks
/// that it is a valid morphism, that `(h′, φ′) ∘ lift = (h, ψ)`, and that
/// it is the only solution.
pub fn cocartesian_verify<A: AdditiveCategory>(
    cat: &A,
    lift: &GrothMorphism<A>,
    test: &GrothMorphism<A>,
    h_prime: Option<&SpaceMorphism>,
) -> Result<GrothMorphism<A>, ControlledError> {
    let h_prime = h_prime.ok_or(ControlledError::NoFactorization)?;
    if lift.src() != test.src() {
        return Err(ControlledError::NotComposable);
    }
    match h_prime.compose(lift.map()) {
        Ok(h) if h == *test.map() => {}
        _ => return Err(ControlledError::NoFactorization),
    }
    let p = lift.src();
    let fp = lift.dst();
    let over = fibers_over(lift.map(), p);
    let mut entries = BTreeMap::new();
    let mut targets: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for (q, x) in test.entries().keys() {
        targets.entry(lift.map().apply(x)).or_insert_with(Vec::new).push(q.clone());
    }
    for (y, qs) in &targets {
        let xs = &over[y];
        let sources: Vec<A::Obj> = xs.iter().map(|x| p.fiber(x).unwrap().clone()).collect();
        for q in qs {
            let target = [test.dst().fiber(q).unwrap().clone()];
            let row = cat.matrix_from_blocks(&target, &sources, &mut |_, j| test.entries().get(&(q.clone(), xs[j].clone())).cloned());
            entries.insert((q.clone(), y.clone()), row);
        }
    }
    let fill = groth_check(cat, h_prime.clone(), fp.clone(), test.dst().clone(), entries)?;
    if groth_compose(cat, &fill, lift)? != *test {
        return Err(AlgebraError::LawViolation {
            law: "cocartesian".into(),
            witness: "fill-in does not recompose to the test morphism".into(),
        }
        .into());
    }
    // Precomposition with the lift is injective iff the injections into
    // each fiber are jointly epic, i.e. Σ ι_x π_x = id.
    for xs in over.values() {
        let objs: Vec<A::Obj> = xs.iter().map(|x| p.fiber(x).unwrap().clone()).collect();
        let total = cat.sum_obj(&objs);
        let sum = (0..objs.len()).fold(cat.zero(&total, &total), |acc, j| {
            cat.add(&acc, &cat.compose(&cat.injection(&objs, j), &cat.projection(&objs, j)))
        });
        if sum != cat.identity(&total) {
            return Err(AlgebraError::LawViolation {
                law: "cocartesian".into(),
                witness: "fill-in is not unique".into(),
            }
            .into());
        }
    }
    Ok(fill)
}
