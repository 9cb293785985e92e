//! A brute-force reference for the matrix engine on finite spaces.
//!
//! An object is evaluated on a subset `B` as the biproduct of its fibers in
//! `B`; a morphism `φ` is evaluated on `B` as the dense block matrix
//! `M(B) → N(U[B])`, with `U` its witness. The oracle recomputes
//! composition, pushforward and tensor product by composing these dense
//! evaluations (through reindexing isomorphisms where summands are
//! regrouped) and compares with the engine's sparse results on every
//! subset. It also checks naturality along every covering inclusion
//! `B ⊂ B ∪ {x}`, which generates the whole inclusion poset.

use std::collections::{BTreeMap, BTreeSet};

use crate::additive::AdditiveCategory;
use crate::coarse::{ent_thicken, Entourage, SpaceMorphism};
use crate::controlled::{ControlledMorphism, ControlledObject};
use crate::groth::GrothMorphism;
use crate::group::GroupElem;
use crate::set::{AmbientSet, Point};

type Entries<M> = BTreeMap<(Point, Point), M>;

/// Support points of `m` inside `b`, in point order, with their fibers.
struct Eval<A: AdditiveCategory> {
    points: Vec<Point>,
    objs: Vec<A::Obj>,
}

fn eval_obj<A: AdditiveCategory>(m: &ControlledObject<A>, b: &BTreeSet<Point>) -> Eval<A> {
    let points: Vec<Point> = m.support().filter(|x| b.contains(*x)).cloned().collect();
    let objs = points.iter().map(|x| m.fiber(x).unwrap().clone()).collect();
    Eval { points, objs }
}

fn dense<A: AdditiveCategory>(cat: &A, entries: &Entries<A::Mor>, rows: &Eval<A>, cols: &Eval<A>) -> A::Mor {
    cat.matrix_from_blocks(&rows.objs, &cols.objs, &mut |i, j| {
        entries.get(&(rows.points[i].clone(), cols.points[j].clone())).cloned()
    })
}

/// The inclusion `M(small) → M(big)`.
fn inclusion<A: AdditiveCategory>(cat: &A, small: &Eval<A>, big: &Eval<A>) -> A::Mor {
    cat.matrix_from_blocks(&big.objs, &small.objs, &mut |i, j| {
        (big.points[i] == small.points[j]).then(|| cat.identity(&small.objs[j]))
    })
}

pub fn subsets(points: &[Point]) -> Vec<BTreeSet<Point>> {
    assert!(points.len() <= 16, "subset enumeration is limited to 16 points");
    (0u32..1 << points.len())
        .map(|mask| points.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect())
        .collect()
}

fn all_points(amb: &AmbientSet) -> Result<Vec<Point>, String> {
    amb.points().ok_or_else(|| "the oracle needs a finite space".to_string())
}

fn thicken(u: &Entourage, amb: &AmbientSet, b: &BTreeSet<Point>) -> Result<BTreeSet<Point>, String> {
    ent_thicken(u, amb, b).ok_or_else(|| format!("thickening by {u} is infinite"))
}

fn name(amb: &AmbientSet, b: &BTreeSet<Point>) -> String {
    let parts: Vec<String> = b.iter().map(|p| amb.render(p).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Every engine entry leaving `b` must land in `t`.
fn lands_in<M>(entries: &Entries<M>, b: &BTreeSet<Point>, t: &BTreeSet<Point>) -> bool {
    entries.keys().all(|(to, from)| !b.contains(from) || t.contains(to))
}

/// Oracle for `ψ ∘ φ`: for every subset `B`,
/// `(ψ∘φ)_B = ψ_{T₁} ∘ φ_B` with `T₁ = U_φ[B]`, and the result is natural
/// in `B`.
pub fn check_composition<A: AdditiveCategory>(
    cat: &A,
    psi: &ControlledMorphism<A>,
    phi: &ControlledMorphism<A>,
    engine: &ControlledMorphism<A>,
) -> Result<usize, String> {
    let amb = phi.src().space().ambient();
    let (m, n, l) = (phi.src(), phi.dst(), psi.dst());
    let mut cache: BTreeMap<BTreeSet<Point>, (BTreeSet<Point>, Eval<A>, Eval<A>, A::Mor)> = BTreeMap::new();
    let all = subsets(&all_points(amb)?);
    for b in &all {
        let t1 = thicken(phi.witness(), amb, b)?;
        let t2 = thicken(psi.witness(), amb, &t1)?;
        if !lands_in(engine.entries(), b, &t2) {
            return Err(format!("composite leaves U_psi[U_phi[{}]]", name(amb, b)));
        }
        let (eb, e1, e2) = (eval_obj(m, b), eval_obj(n, &t1), eval_obj(l, &t2));
        let oracle = cat.compose(&dense(cat, psi.entries(), &e2, &e1), &dense(cat, phi.entries(), &e1, &eb));
        if dense(cat, engine.entries(), &e2, &eb) != oracle {
            return Err(format!("composite differs from the oracle on {}", name(amb, b)));
        }
        cache.insert(b.clone(), (t2, eb, e2, oracle));
    }
    naturality(cat, amb, &cache)?;
    Ok(all.len())
}

/// `value_{B′} ∘ inc = inc ∘ value_B` for `B′ = B ∪ {x}`.
fn naturality<A: AdditiveCategory>(
    cat: &A,
    amb: &AmbientSet,
    cache: &BTreeMap<BTreeSet<Point>, (BTreeSet<Point>, Eval<A>, Eval<A>, A::Mor)>,
) -> Result<(), String> {
    for (b, (_, eb, et, v)) in cache {
        for x in all_points(amb)? {
            if b.contains(&x) {
                continue;
            }
            let mut big = b.clone();
            big.insert(x);
            let (_, eb2, et2, v2) = &cache[&big];
            let lhs = cat.compose(v2, &inclusion(cat, eb, eb2));
            let rhs = cat.compose(&inclusion(cat, et, et2), v);
            if lhs != rhs {
                return Err(format!("not natural along {} ⊂ {}", name(amb, b), name(amb, &big)));
            }
        }
    }
    Ok(())
}

/// `R : (f_*M)(B′) → M(f⁻¹B′)`, regrouping the summands by source point.
fn regroup<A: AdditiveCategory>(cat: &A, f: &SpaceMorphism, m: &ControlledObject<A>, b1: &BTreeSet<Point>) -> A::Mor {
    let pre: BTreeSet<Point> = m.support().filter(|x| b1.contains(&f.apply(x))).cloned().collect();
    let flat = eval_obj(m, &pre);
    let groups: Vec<(Point, Vec<Point>)> = {
        let mut by: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
        for x in &flat.points {
            by.entry(f.apply(x)).or_default().push(x.clone());
        }
        by.into_iter().collect()
    };
    let group_objs: Vec<A::Obj> = groups
        .iter()
        .map(|(_, xs)| cat.sum_obj(&xs.iter().map(|x| m.fiber(x).unwrap().clone()).collect::<Vec<_>>()))
        .collect();
    cat.matrix_from_blocks(&flat.objs, &group_objs, &mut |i, j| {
        let xs = &groups[j].1;
        let k = xs.iter().position(|x| *x == flat.points[i])?;
        let inner: Vec<A::Obj> = xs.iter().map(|x| m.fiber(x).unwrap().clone()).collect();
        Some(cat.projection(&inner, k))
    })
}

/// Oracle for `f_*φ`: `(f_*φ)_{B′} = R⁻¹ ∘ φ_{f⁻¹B′} ∘ R` on every subset
/// `B′` of the target, and the same for `f_*ρ(g)` against `ρ(g)_{f⁻¹B′}`.
pub fn check_pushforward<A: AdditiveCategory>(
    cat: &A,
    f: &SpaceMorphism,
    phi: &ControlledMorphism<A>,
    engine: &ControlledMorphism<A>,
) -> Result<usize, String> {
    let (m, n) = (phi.src(), phi.dst());
    let (fm, fn_) = (engine.src(), engine.dst());
    let amb0 = f.src().ambient();
    let amb1 = f.dst().ambient();
    let all = subsets(&all_points(amb1)?);
    let image_of = |s: &BTreeSet<Point>| -> BTreeSet<Point> { s.iter().map(|x| f.apply(x)).collect() };
    for b1 in &all {
        let pre: BTreeSet<Point> = all_points(amb0)?.into_iter().filter(|x| b1.contains(&f.apply(x))).collect();
        let t0 = thicken(phi.witness(), amb0, &pre)?;
        let t1 = image_of(&t0);
        if !lands_in(engine.entries(), b1, &t1) {
            return Err(format!("pushforward leaves f(U[f⁻¹{}])", name(amb1, b1)));
        }
        let full0: BTreeSet<Point> = all_points(amb0)?.into_iter().filter(|x| t1.contains(&f.apply(x))).collect();
        let r_src = regroup(cat, f, m, b1);
        let r_dst = regroup(cat, f, n, &t1);
        let r_dst_inv = cat.inverse(&r_dst).ok_or("regrouping is not invertible")?;
        let (e_pre, e_t0, e_full) = (eval_obj(m, &pre), eval_obj(n, &t0), eval_obj(n, &full0));
        let oracle = cat.compose(
            &r_dst_inv,
            &cat.compose(&inclusion(cat, &e_t0, &e_full), &cat.compose(&dense(cat, phi.entries(), &e_t0, &e_pre), &r_src)),
        );
        if dense(cat, engine.entries(), &eval_obj(fn_, &t1), &eval_obj(fm, b1)) != oracle {
            return Err(format!("pushforward differs from the oracle on {}", name(amb1, b1)));
        }
    }
    check_pushforward_rho(cat, f, m, fm, &all)?;
    Ok(all.len())
}

/// `ρ(g)_B : M(B) → ⊕_{w ∈ g⁻¹B} g·M(w)`, target in point order.
fn rho_dense<A: AdditiveCategory>(cat: &A, m: &ControlledObject<A>, g: GroupElem, b: &BTreeSet<Point>) -> (A::Mor, Eval<A>) {
    let eb = eval_obj(m, b);
    let pulled: BTreeSet<Point> = b.iter().map(|x| m.pull(g, x)).collect();
    let ew = eval_obj(m, &pulled);
    let targets: Vec<A::Obj> = ew.objs.iter().map(|a| cat.act_obj(g, a)).collect();
    let mor = cat.matrix_from_blocks(&targets, &eb.objs, &mut |i, j| {
        (m.pull(g, &eb.points[j]) == ew.points[i]).then(|| m.rho(g, &eb.points[j]).unwrap().clone())
    });
    (mor, ew)
}

fn check_pushforward_rho<A: AdditiveCategory>(
    cat: &A,
    f: &SpaceMorphism,
    m: &ControlledObject<A>,
    fm: &ControlledObject<A>,
    all: &[BTreeSet<Point>],
) -> Result<(), String> {
    let amb1 = f.dst().ambient();
    for g in f.dst().group().elements() {
        for b1 in all {
            let (engine, _) = rho_dense(cat, fm, g, b1);
            let pre: BTreeSet<Point> = m.support().filter(|x| b1.contains(&f.apply(x))).cloned().collect();
            let (oracle, _) = rho_dense(cat, m, g, &pre);
            let pulled: BTreeSet<Point> = b1.iter().map(|y| fm.pull(g, y)).collect();
            let r_src = regroup(cat, f, m, b1);
            let r_dst = cat.act_mor(g, &regroup(cat, f, m, &pulled));
            // Both routes end in ⊕ g·M(w) over the regrouped target.
            if cat.compose(&r_dst, &engine) != cat.compose(&oracle, &r_src) {
                return Err(format!("pushed-forward rho({}) differs on {}", f.dst().group().label(g), name(amb1, b1)));
            }
        }
    }
    Ok(())
}

/// `D : M(B₁) ⊗ N(B₂) → ⊕_{(x,y)} M(x) ⊗ N(y)`, the distributivity iso
/// onto the rectangle's summands in point order.
fn distribute<A: AdditiveCategory>(cat: &A, em: &Eval<A>, en: &Eval<A>, act: Option<GroupElem>) -> A::Mor {
    let lift = |a: &A::Obj| match act {
        Some(g) => cat.act_obj(g, a),
        None => a.clone(),
    };
    let (mo, no): (Vec<A::Obj>, Vec<A::Obj>) = (em.objs.iter().map(lift).collect(), en.objs.iter().map(lift).collect());
    let src = [cat.tensor_obj(&cat.sum_obj(&mo), &cat.sum_obj(&no))];
    let mut targets = Vec::new();
    let mut slots = Vec::new();
    for (i, a) in em.objs.iter().enumerate() {
        for (j, b) in en.objs.iter().enumerate() {
            slots.push((i, j));
            targets.push(match act {
                Some(g) => cat.act_obj(g, &cat.tensor_obj(a, b)),
                None => cat.tensor_obj(a, b),
            });
        }
    }
    cat.matrix_from_blocks(&targets, &src, &mut |k, _| {
        let (i, j) = slots[k];
        let split = cat.tensor_mor(&cat.projection(&mo, i), &cat.projection(&no, j));
        Some(match act {
            Some(g) => cat.compose(&cat.mu(g, &em.objs[i], &en.objs[j]), &split),
            None => split,
        })
    })
}

fn rect(b1: &BTreeSet<Point>, b2: &BTreeSet<Point>) -> BTreeSet<Point> {
    b1.iter().flat_map(|x| b2.iter().map(move |y| Point::pair(x.clone(), y.clone()))).collect()
}

/// Oracle for `m ⊠ n` (both over identity maps): on every rectangle
/// `B₁ × B₂` of support subsets, `D ∘ (m⊠n)_{B₁×B₂} = (m_{B₁} ⊗ n_{B₂}) ∘ D`
/// up to the distributivity isos, and the tensor cocycle satisfies
/// `g(D) ∘ (ρ⊠ρ′)(g)_{B₁×B₂} = μ^g ∘ (ρ(g)_{B₁} ⊗ ρ′(g)_{B₂})`.
pub fn check_tensor<A: AdditiveCategory>(
    cat: &A,
    m: &GrothMorphism<A>,
    n: &GrothMorphism<A>,
    engine: &GrothMorphism<A>,
) -> Result<usize, String> {
    if !m.map().is_identity() || !n.map().is_identity() {
        return Err("tensor oracle expects morphisms over identities".into());
    }
    let (amb1, amb2) = (m.src().space().ambient(), n.src().space().ambient());
    let s1: Vec<Point> = m.src().support().cloned().collect();
    let s2: Vec<Point> = n.src().support().cloned().collect();
    let mut count = 0;
    for b1 in subsets(&s1) {
        for b2 in subsets(&s2) {
            count += 1;
            let t1 = thicken(m.witness(), amb1, &b1)?;
            let t2 = thicken(n.witness(), amb2, &b2)?;
            let (src_r, dst_r) = (rect(&b1, &b2), rect(&t1, &t2));
            if !lands_in(engine.entries(), &src_r, &dst_r) {
                return Err(format!("tensor leaves the rectangle over {} x {}", name(amb1, &b1), name(amb2, &b2)));
            }
            let (em, en) = (eval_obj(m.src(), &b1), eval_obj(n.src(), &b2));
            let (em2, en2) = (eval_obj(m.dst(), &t1), eval_obj(n.dst(), &t2));
            let d_src = distribute(cat, &em, &en, None);
            let d_dst = distribute(cat, &em2, &en2, None);
            let factors = cat.tensor_mor(&dense(cat, m.entries(), &em2, &em), &dense(cat, n.entries(), &en2, &en));
            let engine_val = dense(cat, engine.entries(), &eval_obj(engine.dst(), &dst_r), &eval_obj(engine.src(), &src_r));
            if cat.compose(&engine_val, &d_src) != cat.compose(&d_dst, &factors) {
                return Err(format!("tensor differs from the oracle on {} x {}", name(amb1, &b1), name(amb2, &b2)));
            }
            for g in m.src().space().group().elements() {
                let (r1, w1) = rho_dense(cat, m.src(), g, &b1);
                let (r2, w2) = rho_dense(cat, n.src(), g, &b2);
                let (rt, _) = rho_dense(cat, engine.src(), g, &src_r);
                let lhs = cat.compose(&distribute(cat, &w1, &w2, Some(g)), &cat.tensor_mor(&r1, &r2));
                if cat.compose(&rt, &d_src) != lhs {
                    return Err(format!("tensor rho({}) differs on {} x {}", m.src().space().group().label(g), name(amb1, &b1), name(amb2, &b2)));
                }
            }
        }
    }
    Ok(count)
}

/// Verdict of the functorial equivariance condition
/// `ρ′(g)_{T} ∘ φ_B = g(φ_{g⁻¹B}) ∘ ρ(g)_B` for all `g` and all subsets
/// `B`, with `T` the whole target support (the space must be such that
/// `U[B]` is all of it, e.g. a Whole-coarse space).
pub fn functorial_equivariance<A: AdditiveCategory>(
    cat: &A,
    src: &ControlledObject<A>,
    dst: &ControlledObject<A>,
    entries: &Entries<A::Mor>,
) -> Result<bool, String> {
    let amb = src.space().ambient();
    let all_pts = all_points(amb)?;
    let full: BTreeSet<Point> = all_pts.iter().cloned().collect();
    let et = eval_obj(dst, &full);
    for g in src.space().group().elements() {
        let (rho_t, _) = rho_dense(cat, dst, g, &full);
        for b in subsets(&all_pts) {
            let eb = eval_obj(src, &b);
            let (rho_b, ew) = rho_dense(cat, src, g, &b);
            let lhs = cat.compose(&rho_t, &dense(cat, entries, &et, &eb));
            let moved = cat.act_mor(g, &dense(cat, entries, &et, &ew));
            // g(N(T)) and ⊕_w g·N(w) agree because the action is additive.
            let rhs = cat.compose(&moved, &rho_b);
            if cat.source(&lhs) != cat.source(&rhs) || cat.target(&lhs) != cat.target(&rhs) || lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::additive::MatCat;
    use crate::coarse::{BornCoarseSpace, Bornology, CoarseStructure};
    use crate::controlled::{mor_compose, ControlledObject};
    use crate::group::{FiniteGroup, GAction};
    use crate::matrix::Matrix;
    use crate::ring::Integers;
    use num_bigint::BigInt;

    fn two_points() -> Arc<BornCoarseSpace> {
        let action = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::numbered(2));
        Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
    }

    fn rank_one(space: &Arc<BornCoarseSpace>) -> Arc<ControlledObject<MatCat<Integers>>> {
        let cat = MatCat::new(Integers);
        let fibers = [(Point::Label(0), 1), (Point::Label(1), 1)].into_iter().collect();
        let rho = vec![[(Point::Label(0), Matrix::identity(&Integers, 1)), (Point::Label(1), Matrix::identity(&Integers, 1))]
            .into_iter()
            .collect()];
        Arc::new(ControlledObject::from_parts(&cat, space.clone(), fibers, rho))
    }

    fn scalar(v: i64) -> Matrix<BigInt> {
        Matrix::from_vec(1, 1, vec![BigInt::from(v)])
    }

    #[test]
    fn subset_count() {
        assert_eq!(subsets(&[Point::Label(0), Point::Label(1), Point::Label(2)]).len(), 8);
    }

    #[test]
    fn composition_of_swaps_matches() {
        let cat = MatCat::new(Integers);
        let space = two_points();
        let m = rank_one(&space);
        let l = |i| Point::Label(i);
        let entries: Entries<_> = [((l(0), l(1)), scalar(2)), ((l(1), l(0)), scalar(3))].into_iter().collect();
        let phi = ControlledMorphism::from_parts(&cat, m.clone(), m.clone(), entries);
        let comp = mor_compose(&cat, &phi, &phi).unwrap();
        assert_eq!(comp.entry(&cat, &l(0), &l(0)), scalar(6));
        assert_eq!(check_composition(&cat, &phi, &phi, &comp), Ok(4));
    }

    #[test]
    fn wrong_composite_is_caught() {
        let cat = MatCat::new(Integers);
        let space = two_points();
        let m = rank_one(&space);
        let l = |i| Point::Label(i);
        let phi = ControlledMorphism::from_parts(&cat, m.clone(), m.clone(), [((l(0), l(1)), scalar(2))].into_iter().collect());
        let fake = ControlledMorphism::from_parts(&cat, m.clone(), m.clone(), [((l(0), l(1)), scalar(1))].into_iter().collect());
        assert!(check_composition(&cat, &crate::controlled::mor_identity(&cat, &m), &phi, &fake).is_err());
    }
}
