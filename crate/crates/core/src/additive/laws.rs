//! Randomised checks that an [`AdditiveCategory`] really is additive,
//! symmetric monoidal, and carries a strict action by symmetric monoidal
//! functors.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AdditiveCategory;
use crate::error::AlgebraError;
use crate::group::{FiniteGroup, GroupElem};

const LAWS: &[&str] = &[
    "abelian_group",
    "bilinear_composition",
    "category",
    "biproduct",
    "blocks",
    "tensor_bifunctor",
    "tensor_additive",
    "alpha_natural",
    "eta_natural",
    "sigma_natural",
    "pentagon",
    "triangle",
    "inverse_relation",
    "hexagon",
    "action_functor",
    "action_strict",
    "mu_natural",
    "action_monoidal",
];

pub fn instance_law_names() -> &'static [&'static str] {
    LAWS
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceLawReport {
    pub law: String,
    pub checked: usize,
    pub first_failure: Option<AlgebraError>,
}

fn violation(law: &str, witness: String) -> AlgebraError {
    AlgebraError::LawViolation {
        law: law.to_string(),
        witness,
    }
}

struct Ctx<'a, A: AdditiveCategory> {
    cat: &'a A,
    group: &'a FiniteGroup,
    rng: &'a mut dyn RngCore,
    law: &'a str,
}

impl<A: AdditiveCategory> Ctx<'_, A> {
    fn obj(&mut self, max_rank: usize) -> A::Obj {
        self.cat.random_obj(self.rng, max_rank, &[])
    }

    fn mor(&mut self, from: &A::Obj, to: &A::Obj) -> A::Mor {
        self.cat.random_mor(self.rng, from, to)
    }

    fn elem(&mut self) -> GroupElem {
        GroupElem(self.rng.random_range(0..self.group.order()) as u32)
    }

    fn eq(&self, what: &str, lhs: &A::Mor, rhs: &A::Mor) -> Result<(), AlgebraError> {
        if lhs == rhs {
            Ok(())
        } else {
            Err(violation(
                self.law,
                format!("{what}: {} vs {}", self.cat.mor_to_json(lhs), self.cat.mor_to_json(rhs)),
            ))
        }
    }

    fn eq_obj(&self, what: &str, lhs: &A::Obj, rhs: &A::Obj) -> Result<(), AlgebraError> {
        if lhs == rhs {
            Ok(())
        } else {
            Err(violation(
                self.law,
                format!("{what}: {} vs {}", self.cat.obj_to_json(lhs), self.cat.obj_to_json(rhs)),
            ))
        }
    }
}

/// Runs one random instance of `law`.
pub fn run_instance_law<A: AdditiveCategory>(
    cat: &A,
    group: &FiniteGroup,
    law: &str,
    rng: &mut dyn RngCore,
) -> Result<(), AlgebraError> {
    if !cat.acts_with(group) {
        return Err(AlgebraError::GroupMismatch);
    }
    let mut cx = Ctx { cat, group, rng, law };
    match law {
        "abelian_group" => abelian_group(&mut cx),
        "bilinear_composition" => bilinear_composition(&mut cx),
        "category" => category(&mut cx),
        "biproduct" => biproduct(&mut cx),
        "blocks" => blocks(&mut cx),
        "tensor_bifunctor" => tensor_bifunctor(&mut cx),
        "tensor_additive" => tensor_additive(&mut cx),
        "alpha_natural" => alpha_natural(&mut cx),
        "eta_natural" => eta_natural(&mut cx),
        "sigma_natural" => sigma_natural(&mut cx),
        "pentagon" => pentagon(&mut cx),
        "triangle" => triangle(&mut cx),
        "inverse_relation" => inverse_relation(&mut cx),
        "hexagon" => hexagon(&mut cx),
        "action_functor" => action_functor(&mut cx),
        "action_strict" => action_strict(&mut cx),
        "mu_natural" => mu_natural(&mut cx),
        "action_monoidal" => action_monoidal(&mut cx),
        other => Err(violation(other, "unknown law".into())),
    }
}

/// Runs every law `samples` times with a deterministic generator.
pub fn check_instance_laws<A: AdditiveCategory>(
    cat: &A,
    group: &FiniteGroup,
    seed: u64,
    samples: usize,
) -> Vec<InstanceLawReport> {
    LAWS.iter()
        .enumerate()
        .map(|(i, law)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 32));
            let mut checked = 0;
            let mut first_failure = None;
            for _ in 0..samples {
                checked += 1;
                if let Err(e) = run_instance_law(cat, group, law, &mut rng) {
                    first_failure = Some(e);
                    break;
                }
            }
            InstanceLawReport {
                law: law.to_string(),
                checked,
                first_failure,
            }
        })
        .collect()
}

/// Checks that composing the action of `h` and then `g` is literally the
/// action of `gh`, including the monoidal structure maps, for every pair of
/// group elements and the given test objects.
pub fn strictness<A: AdditiveCategory>(
    cat: &A,
    group: &FiniteGroup,
    objs: &[A::Obj],
    mors: &[A::Mor],
) -> Result<(), AlgebraError> {
    let law = "strictness";
    let e = group.unit();
    let unit = cat.unit();
    if cat.epsilon(e) != cat.identity(&unit) {
        return Err(violation(law, "epsilon(e) is not the identity".into()));
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            let composite_eps = cat.compose(&cat.act_mor(g, &cat.epsilon(h)), &cat.epsilon(g));
            if composite_eps != cat.epsilon(gh) {
                return Err(violation(law, format!("epsilon at ({}, {})", group.label(g), group.label(h))));
            }
            for a in objs {
                if cat.act_obj(g, &cat.act_obj(h, a)) != cat.act_obj(gh, a) {
                    return Err(violation(law, format!("objects at ({}, {})", group.label(g), group.label(h))));
                }
                for b in objs {
                    let ha = cat.act_obj(h, a);
                    let hb = cat.act_obj(h, b);
                    let composite = cat.compose(&cat.act_mor(g, &cat.mu(h, a, b)), &cat.mu(g, &ha, &hb));
                    if composite != cat.mu(gh, a, b) {
                        return Err(violation(law, format!("mu at ({}, {})", group.label(g), group.label(h))));
                    }
                }
            }
            for f in mors {
                if cat.act_mor(g, &cat.act_mor(h, f)) != cat.act_mor(gh, f) {
                    return Err(violation(law, format!("morphisms at ({}, {})", group.label(g), group.label(h))));
                }
            }
        }
    }
    for a in objs {
        if cat.act_obj(e, a) != *a {
            return Err(violation(law, "unit does not act trivially on objects".into()));
        }
        for b in objs {
            if cat.mu(e, a, b) != cat.identity(&cat.tensor_obj(a, b)) {
                return Err(violation(law, "mu(e) is not the identity".into()));
            }
        }
    }
    for f in mors {
        if cat.act_mor(e, f) != *f {
            return Err(violation(law, "unit does not act trivially on morphisms".into()));
        }
    }
    Ok(())
}

fn abelian_group<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b) = (cx.obj(3), cx.obj(3));
    let (f, g, h) = (cx.mor(&a, &b), cx.mor(&a, &b), cx.mor(&a, &b));
    let c = cx.cat;
    cx.eq("commutative", &c.add(&f, &g), &c.add(&g, &f))?;
    cx.eq("associative", &c.add(&c.add(&f, &g), &h), &c.add(&f, &c.add(&g, &h)))?;
    cx.eq("zero", &c.add(&f, &c.zero(&a, &b)), &f)?;
    if !c.is_zero(&c.add(&f, &c.neg(&f))) {
        return Err(violation(cx.law, "f + (-f) is not zero".into()));
    }
    Ok(())
}

fn bilinear_composition<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d, e) = (cx.obj(3), cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, g) = (cx.mor(&b, &d), cx.mor(&b, &d));
    let (h, k) = (cx.mor(&d, &e), cx.mor(&a, &b));
    let c = cx.cat;
    cx.eq(
        "left",
        &c.compose(&h, &c.add(&f, &g)),
        &c.add(&c.compose(&h, &f), &c.compose(&h, &g)),
    )?;
    cx.eq(
        "right",
        &c.compose(&c.add(&f, &g), &k),
        &c.add(&c.compose(&f, &k), &c.compose(&g, &k)),
    )?;
    cx.eq("zero", &c.compose(&h, &c.zero(&b, &d)), &c.zero(&b, &e))
}

fn category<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d, e) = (cx.obj(3), cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, g, h) = (cx.mor(&a, &b), cx.mor(&b, &d), cx.mor(&d, &e));
    let c = cx.cat;
    cx.eq("left identity", &c.compose(&c.identity(&b), &f), &f)?;
    cx.eq("right identity", &c.compose(&f, &c.identity(&a)), &f)?;
    cx.eq(
        "associativity",
        &c.compose(&h, &c.compose(&g, &f)),
        &c.compose(&c.compose(&h, &g), &f),
    )?;
    let auto = c.random_auto(cx.rng, &a);
    let inv = c
        .inverse(&auto)
        .ok_or_else(|| violation(cx.law, "random automorphism has no inverse".into()))?;
    cx.eq("inverse", &c.compose(&inv, &auto), &c.identity(&a))
}

fn biproduct<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let n = cx.rng.random_range(1..=3);
    let objs: Vec<A::Obj> = (0..n).map(|_| cx.obj(3)).collect();
    let c = cx.cat;
    let bp = c.biproduct(&objs);
    for (j, a) in objs.iter().enumerate() {
        for (k, b) in objs.iter().enumerate() {
            let pi = c.compose(&bp.projections[j], &bp.injections[k]);
            let expected = if j == k { c.identity(a) } else { c.zero(b, a) };
            cx.eq("projection after injection", &pi, &expected)?;
        }
    }
    let total = bp
        .injections
        .iter()
        .zip(&bp.projections)
        .fold(c.zero(&bp.obj, &bp.obj), |acc, (i, p)| c.add(&acc, &c.compose(i, p)));
    cx.eq("sum of idempotents", &total, &c.identity(&bp.obj))?;
    if c.is_zero_obj(&c.zero_obj()) {
        Ok(())
    } else {
        Err(violation(cx.law, "zero object is not zero".into()))
    }
}

fn blocks<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let targets: Vec<A::Obj> = (0..cx.rng.random_range(1..=3)).map(|_| cx.obj(2)).collect();
    let sources: Vec<A::Obj> = (0..cx.rng.random_range(1..=3)).map(|_| cx.obj(2)).collect();
    let bl: Vec<Vec<A::Mor>> = targets
        .iter()
        .map(|t| sources.iter().map(|s| cx.mor(s, t)).collect())
        .collect();
    let c = cx.cat;
    let m = c.matrix_from_blocks(&targets, &sources, &mut |i, j| Some(bl[i][j].clone()));
    for i in 0..targets.len() {
        for j in 0..sources.len() {
            cx.eq("block", &c.block(&targets, &sources, &m, i, j), &bl[i][j])?;
            let generic = c.compose(
                &c.projection(&targets, i),
                &c.compose(&m, &c.injection(&sources, j)),
            );
            cx.eq("block via biproduct", &generic, &bl[i][j])?;
        }
    }
    Ok(())
}

fn tensor_bifunctor<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let (a2, b2, d2) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let (f, f2) = (cx.mor(&a, &b), cx.mor(&b, &d));
    let (g, g2) = (cx.mor(&a2, &b2), cx.mor(&b2, &d2));
    let c = cx.cat;
    cx.eq(
        "interchange",
        &c.tensor_mor(&c.compose(&f2, &f), &c.compose(&g2, &g)),
        &c.compose(&c.tensor_mor(&f2, &g2), &c.tensor_mor(&f, &g)),
    )?;
    cx.eq(
        "identities",
        &c.tensor_mor(&c.identity(&a), &c.identity(&a2)),
        &c.identity(&c.tensor_obj(&a, &a2)),
    )?;
    let t = c.tensor_mor(&f, &g);
    cx.eq_obj("source", &c.source(&t), &c.tensor_obj(&a, &a2))?;
    cx.eq_obj("target", &c.target(&t), &c.tensor_obj(&b, &b2))
}

fn tensor_additive<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, a2, b2) = (cx.obj(3), cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, f2, g, g2) = (cx.mor(&a, &b), cx.mor(&a, &b), cx.mor(&a2, &b2), cx.mor(&a2, &b2));
    let c = cx.cat;
    cx.eq(
        "left",
        &c.tensor_mor(&c.add(&f, &f2), &g),
        &c.add(&c.tensor_mor(&f, &g), &c.tensor_mor(&f2, &g)),
    )?;
    cx.eq(
        "right",
        &c.tensor_mor(&f, &c.add(&g, &g2)),
        &c.add(&c.tensor_mor(&f, &g), &c.tensor_mor(&f, &g2)),
    )
}

fn alpha_natural<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let (a2, b2, d2) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let (f, g, h) = (cx.mor(&a, &a2), cx.mor(&b, &b2), cx.mor(&d, &d2));
    let c = cx.cat;
    cx.eq(
        "naturality",
        &c.compose(&c.alpha(&a2, &b2, &d2), &c.tensor_mor(&c.tensor_mor(&f, &g), &h)),
        &c.compose(&c.tensor_mor(&f, &c.tensor_mor(&g, &h)), &c.alpha(&a, &b, &d)),
    )
}

fn eta_natural<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b) = (cx.obj(3), cx.obj(3));
    let f = cx.mor(&a, &b);
    let c = cx.cat;
    let one = c.unit();
    cx.eq(
        "naturality",
        &c.compose(&c.eta(&b), &c.tensor_mor(&c.identity(&one), &f)),
        &c.compose(&f, &c.eta(&a)),
    )?;
    c.inverse(&c.eta(&a))
        .map(|_| ())
        .ok_or_else(|| violation(cx.law, "eta is not invertible".into()))
}

fn sigma_natural<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, a2, b2) = (cx.obj(3), cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, g) = (cx.mor(&a, &a2), cx.mor(&b, &b2));
    let c = cx.cat;
    cx.eq(
        "naturality",
        &c.compose(&c.sigma(&a2, &b2), &c.tensor_mor(&f, &g)),
        &c.compose(&c.tensor_mor(&g, &f), &c.sigma(&a, &b)),
    )
}

fn pentagon<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d, e) = (cx.obj(2), cx.obj(2), cx.obj(2), cx.obj(2));
    let c = cx.cat;
    let t = |x: &A::Obj, y: &A::Obj| c.tensor_obj(x, y);
    let lhs = c.compose(&c.alpha(&a, &b, &t(&d, &e)), &c.alpha(&t(&a, &b), &d, &e));
    let rhs = c.compose(
        &c.tensor_mor(&c.identity(&a), &c.alpha(&b, &d, &e)),
        &c.compose(
            &c.alpha(&a, &t(&b, &d), &e),
            &c.tensor_mor(&c.alpha(&a, &b, &d), &c.identity(&e)),
        ),
    );
    cx.eq("pentagon", &lhs, &rhs)
}

fn triangle<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b) = (cx.obj(3), cx.obj(3));
    let c = cx.cat;
    let one = c.unit();
    // The right unitor is derived from the left one and the symmetry.
    let rho_a = c.compose(&c.eta(&a), &c.sigma(&a, &one));
    cx.eq(
        "triangle",
        &c.compose(&c.tensor_mor(&c.identity(&a), &c.eta(&b)), &c.alpha(&a, &one, &b)),
        &c.tensor_mor(&rho_a, &c.identity(&b)),
    )
}

fn inverse_relation<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b) = (cx.obj(3), cx.obj(3));
    let c = cx.cat;
    cx.eq(
        "inverse relation",
        &c.compose(&c.sigma(&b, &a), &c.sigma(&a, &b)),
        &c.identity(&c.tensor_obj(&a, &b)),
    )
}

fn hexagon<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let c = cx.cat;
    let lhs = c.compose(
        &c.alpha(&b, &d, &a),
        &c.compose(&c.sigma(&a, &c.tensor_obj(&b, &d)), &c.alpha(&a, &b, &d)),
    );
    let rhs = c.compose(
        &c.tensor_mor(&c.identity(&b), &c.sigma(&a, &d)),
        &c.compose(&c.alpha(&b, &a, &d), &c.tensor_mor(&c.sigma(&a, &b), &c.identity(&d))),
    );
    cx.eq("hexagon", &lhs, &rhs)
}

fn action_functor<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d) = (cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, f2, h) = (cx.mor(&a, &b), cx.mor(&a, &b), cx.mor(&b, &d));
    let g = cx.elem();
    let c = cx.cat;
    cx.eq(
        "composition",
        &c.act_mor(g, &c.compose(&h, &f)),
        &c.compose(&c.act_mor(g, &h), &c.act_mor(g, &f)),
    )?;
    cx.eq("identity", &c.act_mor(g, &c.identity(&a)), &c.identity(&c.act_obj(g, &a)))?;
    cx.eq(
        "additive",
        &c.act_mor(g, &c.add(&f, &f2)),
        &c.add(&c.act_mor(g, &f), &c.act_mor(g, &f2)),
    )?;
    cx.eq_obj("source", &c.source(&c.act_mor(g, &f)), &c.act_obj(g, &a))?;
    let objs = [a.clone(), b.clone(), d.clone()];
    let moved: Vec<A::Obj> = objs.iter().map(|x| c.act_obj(g, x)).collect();
    cx.eq_obj("sums", &c.act_obj(g, &c.sum_obj(&objs)), &c.sum_obj(&moved))?;
    for j in 0..objs.len() {
        cx.eq(
            "injections",
            &c.act_mor(g, &c.injection(&objs, j)),
            &c.injection(&moved, j),
        )?;
    }
    Ok(())
}

fn action_strict<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b) = (cx.obj(3), cx.obj(3));
    let f = cx.mor(&a, &b);
    let (g, h) = (cx.elem(), cx.elem());
    let group = cx.group;
    let c = cx.cat;
    let gh = group.mul(g, h);
    cx.eq_obj("objects", &c.act_obj(g, &c.act_obj(h, &a)), &c.act_obj(gh, &a))?;
    cx.eq("morphisms", &c.act_mor(g, &c.act_mor(h, &f)), &c.act_mor(gh, &f))?;
    cx.eq(
        "epsilon",
        &c.compose(&c.act_mor(g, &c.epsilon(h)), &c.epsilon(g)),
        &c.epsilon(gh),
    )?;
    let (ha, hb) = (c.act_obj(h, &a), c.act_obj(h, &b));
    cx.eq(
        "mu",
        &c.compose(&c.act_mor(g, &c.mu(h, &a, &b)), &c.mu(g, &ha, &hb)),
        &c.mu(gh, &a, &b),
    )?;
    let e = group.unit();
    cx.eq_obj("unit on objects", &c.act_obj(e, &a), &a)?;
    cx.eq("unit on morphisms", &c.act_mor(e, &f), &f)
}

fn mu_natural<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, a2, b2) = (cx.obj(3), cx.obj(3), cx.obj(3), cx.obj(3));
    let (f, f2) = (cx.mor(&a, &a2), cx.mor(&b, &b2));
    let g = cx.elem();
    let c = cx.cat;
    cx.eq(
        "naturality",
        &c.compose(&c.act_mor(g, &c.tensor_mor(&f, &f2)), &c.mu(g, &a, &b)),
        &c.compose(
            &c.mu(g, &a2, &b2),
            &c.tensor_mor(&c.act_mor(g, &f), &c.act_mor(g, &f2)),
        ),
    )?;
    c.inverse(&c.mu(g, &a, &b))
        .map(|_| ())
        .ok_or_else(|| violation(cx.law, "mu is not invertible".into()))
}

fn action_monoidal<A: AdditiveCategory>(cx: &mut Ctx<A>) -> Result<(), AlgebraError> {
    let (a, b, d) = (cx.obj(2), cx.obj(2), cx.obj(2));
    let g = cx.elem();
    let c = cx.cat;
    let t = |x: &A::Obj, y: &A::Obj| c.tensor_obj(x, y);
    let (ga, gb, gd) = (c.act_obj(g, &a), c.act_obj(g, &b), c.act_obj(g, &d));
    let lhs = c.compose(
        &c.act_mor(g, &c.alpha(&a, &b, &d)),
        &c.compose(
            &c.mu(g, &t(&a, &b), &d),
            &c.tensor_mor(&c.mu(g, &a, &b), &c.identity(&gd)),
        ),
    );
    let rhs = c.compose(
        &c.mu(g, &a, &t(&b, &d)),
        &c.compose(
            &c.tensor_mor(&c.identity(&ga), &c.mu(g, &b, &d)),
            &c.alpha(&ga, &gb, &gd),
        ),
    );
    cx.eq("associativity", &lhs, &rhs)?;
    let one = c.unit();
    cx.eq(
        "unit",
        &c.compose(
            &c.act_mor(g, &c.eta(&a)),
            &c.compose(
                &c.mu(g, &one, &a),
                &c.tensor_mor(&c.epsilon(g), &c.identity(&ga)),
            ),
        ),
        &c.eta(&ga),
    )?;
    cx.eq(
        "symmetry",
        &c.compose(&c.act_mor(g, &c.sigma(&a, &b)), &c.mu(g, &a, &b)),
        &c.compose(&c.mu(g, &b, &a), &c.sigma(&ga, &gb)),
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::additive::{MatCat, ShiftCat};
    use crate::ring::{IntMod, Integers, Rationals};

    fn assert_all_pass(reports: &[InstanceLawReport]) {
        for r in reports {
            assert!(r.first_failure.is_none(), "{}: {:?}", r.law, r.first_failure);
        }
    }

    #[test]
    fn matrices_satisfy_every_law() {
        let z2 = FiniteGroup::cyclic(2);
        assert_all_pass(&check_instance_laws(&MatCat::new(IntMod::new(2).unwrap()), &z2, 1, 10));
        assert_all_pass(&check_instance_laws(&MatCat::new(Integers), &z2, 2, 10));
        assert_all_pass(&check_instance_laws(&MatCat::new(Rationals), &z2, 3, 10));
    }

    #[test]
    fn shifts_satisfy_every_law() {
        for n in [2, 3] {
            let g = Arc::new(FiniteGroup::cyclic(n));
            let cat = ShiftCat::new(g.clone(), format!("Z{n}"), Integers);
            assert_all_pass(&check_instance_laws(&cat, &g, 4, 10));
        }
    }

    #[test]
    fn fake_symmetry_fails_only_naturality() {
        let z2 = FiniteGroup::cyclic(2);
        let reports = check_instance_laws(&MatCat::fake_sigma(Integers), &z2, 5, 40);
        for r in reports {
            assert_eq!(r.first_failure.is_some(), r.law == "sigma_natural", "{}", r.law);
        }
    }

    #[test]
    fn strict_for_every_pair() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let cat = ShiftCat::new(g.clone(), "Z3".into(), Integers);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let objs: Vec<_> = (0..3).map(|_| cat.random_obj(&mut rng, 2, &[])).collect();
        let mors = vec![cat.random_mor(&mut rng, &objs[0], &objs[1])];
        strictness(&cat, &g, &objs, &mors).unwrap();
    }
}
