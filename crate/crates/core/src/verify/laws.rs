//! Law bodies. Each takes a fresh generator for one case and either
//! returns normally or reports a [`Breach`].

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::additive::{run_instance_law, strictness, AdditiveCategory};
use crate::coarse::{
    ent_compose, morphism_check, space_constraints, space_tensor, BornCoarseSpace, Bornology, CoarseStructure,
    Entourage, MapTerm, SpaceMorphism,
};
use crate::controlled::{
    biproduct_injection, biproduct_projection, mor_add, mor_check, mor_compose, mor_is_iso, mor_negate, obj_biproduct,
    obj_check, pushforward_mor, pushforward_obj, reassociate, ControlledMorphism, ControlledObject,
};
use crate::error::{AlgebraError, ControlledError, GroupError, MapError, SpaceError};
use crate::groth::{
    bi_additivity_map, cocartesian_lift, cocartesian_verify, constraint_assoc, constraint_symm, constraint_unit,
    exchange_map, groth_add, groth_compose, groth_identity, mor_tensor, obj_tensor, unit_object, GrothMorphism, Side,
};
use crate::group::{ActionKind, FiniteGroup, GAction};
use crate::oracle;
use crate::set::{AmbientSet, Point};

use super::fixtures::Shape;
use super::gen::{window, Generator};

/// Why a case did not pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Breach {
    Violation { class: String, message: String },
    /// A membership question exceeded the search bound.
    Unknown(String),
}

impl Breach {
    pub fn law(message: impl Into<String>) -> Breach {
        Breach::Violation { class: "LawViolation".into(), message: message.into() }
    }
}

impl From<ControlledError> for Breach {
    fn from(e: ControlledError) -> Self {
        match e.class() {
            "SearchBoundExceeded" => Breach::Unknown(e.to_string()),
            class => Breach::Violation { class: class.into(), message: e.to_string() },
        }
    }
}

impl From<MapError> for Breach {
    fn from(e: MapError) -> Self {
        ControlledError::from(e).into()
    }
}

impl From<SpaceError> for Breach {
    fn from(e: SpaceError) -> Self {
        ControlledError::from(e).into()
    }
}

impl From<GroupError> for Breach {
    fn from(e: GroupError) -> Self {
        SpaceError::from(e).into()
    }
}

impl From<AlgebraError> for Breach {
    fn from(e: AlgebraError) -> Self {
        ControlledError::from(e).into()
    }
}

pub type LawResult = Result<(), Breach>;

type Obj<A> = Arc<ControlledObject<A>>;

/// Everything one case needs.
pub struct Ctx<'a, A: AdditiveCategory> {
    pub cat: &'a A,
    pub group: Arc<FiniteGroup>,
    pub primary: Shape,
    pub shapes: &'a [Shape],
    pub gen: Generator,
    pub tags: Vec<String>,
}

impl<A: AdditiveCategory> Ctx<'_, A> {
    pub fn space(&self, shape: &Shape) -> Arc<BornCoarseSpace> {
        shape.build(&self.group)
    }

    fn other_shape(&mut self) -> Shape {
        self.gen.pick(self.shapes).clone()
    }

    fn obj(&mut self, space: &Arc<BornCoarseSpace>, points: usize, rank: usize) -> Obj<A> {
        Arc::new(self.gen.object(self.cat, space, points, rank))
    }

    fn mor(&mut self, src: &Obj<A>, dst: &Obj<A>) -> ControlledMorphism<A> {
        self.gen.morphism(self.cat, src, dst)
    }

    /// A random map out of `shape`; falls back to the identity.
    fn map_from(&mut self, shape: &Shape) -> (SpaceMorphism, Shape) {
        let src = self.space(shape);
        let targets = shape.map_targets();
        let target = self.gen.pick(&targets).clone();
        let dst = self.space(&target);
        match self.gen.space_map(&src, &dst) {
            Some(f) => (f, target),
            None => (SpaceMorphism::identity(src), shape.clone()),
        }
    }

    fn tag_map(&mut self, f: &SpaceMorphism, support: &[Point]) {
        let images: BTreeSet<Point> = support.iter().map(|x| f.apply(x)).collect();
        if images.len() < support.len() {
            self.tags.push("map:non_injective".into());
        }
        let radius = self.gen.params.max_radius;
        let hit: BTreeSet<Point> = window(f.src().ambient(), 4 * radius).iter().map(|x| f.apply(x)).collect();
        if window(f.dst().ambient(), 2).iter().any(|y| !hit.contains(y)) {
            self.tags.push("map:non_surjective".into());
        }
    }
}

fn support<A: AdditiveCategory>(m: &ControlledObject<A>) -> Vec<Point> {
    m.support().cloned().collect()
}

fn expect_eq<T: PartialEq>(lhs: &T, rhs: &T, what: &str) -> LawResult {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Breach::law(format!("{what}: the two sides differ")))
    }
}

fn compose<A: AdditiveCategory>(cat: &A, parts: &[&GrothMorphism<A>]) -> Result<GrothMorphism<A>, Breach> {
    let mut it = parts.iter().rev();
    let mut acc = (*it.next().expect("nonempty chain")).clone();
    for m in it {
        acc = groth_compose(cat, m, &acc)?;
    }
    Ok(acc)
}

fn is_iso<A: AdditiveCategory>(cat: &A, phi: &ControlledMorphism<A>, what: &str) -> LawResult {
    phi.recheck(cat)?;
    mor_is_iso(cat, phi).map(|_| ()).ok_or_else(|| Breach::law(format!("{what} is not invertible")))
}

// ---------------------------------------------------------------- coherence

fn four_objects<A: AdditiveCategory>(cx: &mut Ctx<'_, A>, n: usize) -> Vec<Obj<A>> {
    let mut out = Vec::new();
    for i in 0..n {
        let shape = if i == 0 { cx.primary.clone() } else { cx.other_shape() };
        let space = cx.space(&shape);
        out.push(cx.obj(&space, 2, 2));
    }
    out
}

pub fn pentagon<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let v = four_objects(cx, 4);
    let (p, q, r, s) = (&v[0], &v[1], &v[2], &v[3]);
    let qr = obj_tensor(cat, q, r)?;
    let a1 = mor_tensor(cat, &constraint_assoc(cat, p, q, r)?, &groth_identity(cat, s))?;
    let a2 = constraint_assoc(cat, p, &qr, s)?;
    let a3 = mor_tensor(cat, &groth_identity(cat, p), &constraint_assoc(cat, q, r, s)?)?;
    let lhs = compose(cat, &[&a3, &a2, &a1])?;
    let b1 = constraint_assoc(cat, &obj_tensor(cat, p, q)?, r, s)?;
    let b2 = constraint_assoc(cat, p, q, &obj_tensor(cat, r, s)?)?;
    let rhs = compose(cat, &[&b2, &b1])?;
    expect_eq(&lhs, &rhs, "pentagon")
}

pub fn triangle<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let v = four_objects(cx, 2);
    let (p, q) = (&v[0], &v[1]);
    let one = unit_object(cat, &cx.group);
    let assoc = constraint_assoc(cat, p, &one, q)?;
    let lhs = groth_compose(cat, &mor_tensor(cat, &groth_identity(cat, p), &constraint_unit(cat, q)?)?, &assoc)?;
    // The right unitor is the left unitor after the symmetry.
    let right_unitor = groth_compose(cat, &constraint_unit(cat, p)?, &constraint_symm(cat, p, &one)?)?;
    let rhs = mor_tensor(cat, &right_unitor, &groth_identity(cat, q))?;
    expect_eq(&lhs, &rhs, "triangle")
}

pub fn inverse<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let v = four_objects(cx, 2);
    let (p, q) = (&v[0], &v[1]);
    let twice = groth_compose(cat, &constraint_symm(cat, q, p)?, &constraint_symm(cat, p, q)?)?;
    let id = groth_identity(cat, &Arc::new(obj_tensor(cat, p, q)?));
    expect_eq(&twice, &id, "symmetry twice")
}

pub fn hexagon<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let v = four_objects(cx, 3);
    let (p, q, r) = (&v[0], &v[1], &v[2]);
    let qr = obj_tensor(cat, q, r)?;
    let lhs = compose(
        cat,
        &[&constraint_assoc(cat, q, r, p)?, &constraint_symm(cat, p, &qr)?, &constraint_assoc(cat, p, q, r)?],
    )?;
    let rhs = compose(
        cat,
        &[
            &mor_tensor(cat, &groth_identity(cat, q), &constraint_symm(cat, p, r)?)?,
            &constraint_assoc(cat, q, p, r)?,
            &mor_tensor(cat, &constraint_symm(cat, p, q)?, &groth_identity(cat, r))?,
        ],
    )?;
    expect_eq(&lhs, &rhs, "hexagon")
}

/// A random morphism out of a fresh object on `shape`.
fn morphism_out<A: AdditiveCategory>(cx: &mut Ctx<'_, A>, shape: &Shape, points: usize, rank: usize) -> GrothMorphism<A> {
    morphism_out_to(cx, shape, points, rank).0
}

/// As [`morphism_out`], also naming the target shape.
fn morphism_out_to<A: AdditiveCategory>(
    cx: &mut Ctx<'_, A>,
    shape: &Shape,
    points: usize,
    rank: usize,
) -> (GrothMorphism<A>, Shape) {
    let p = cx.obj(&cx.space(shape), points, rank);
    let (f, target) = cx.map_from(shape);
    let q = cx.obj(&cx.space(&target), points, rank);
    (cx.gen.groth_morphism(cx.cat, &f, &p, &q), target)
}

pub fn naturality<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let primary = cx.primary.clone();
    let m = morphism_out(cx, &primary, 2, 2);
    let s1 = cx.other_shape();
    let n = morphism_out(cx, &s1, 2, 2);
    let s2 = cx.other_shape();
    let k = morphism_out(cx, &s2, 2, 2);
    let (p, q, r) = (m.src(), n.src(), k.src());
    let (p2, q2, r2) = (m.dst(), n.dst(), k.dst());

    let lhs = groth_compose(cat, &constraint_symm(cat, p2, q2)?, &mor_tensor(cat, &m, &n)?)?;
    let rhs = groth_compose(cat, &mor_tensor(cat, &n, &m)?, &constraint_symm(cat, p, q)?)?;
    expect_eq(&lhs, &rhs, "symmetry naturality")?;

    let lhs = groth_compose(cat, &constraint_assoc(cat, p2, q2, r2)?, &mor_tensor(cat, &mor_tensor(cat, &m, &n)?, &k)?)?;
    let rhs = groth_compose(cat, &mor_tensor(cat, &m, &mor_tensor(cat, &n, &k)?)?, &constraint_assoc(cat, p, q, r)?)?;
    expect_eq(&lhs, &rhs, "associator naturality")?;

    let one = Arc::new(unit_object(cat, &cx.group));
    let lhs = groth_compose(cat, &constraint_unit(cat, p2)?, &mor_tensor(cat, &groth_identity(cat, &one), &m)?)?;
    let rhs = groth_compose(cat, &m, &constraint_unit(cat, p)?)?;
    expect_eq(&lhs, &rhs, "unitor naturality")
}

// ---------------------------------------------------------------- fibration

pub fn strict_projection<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let primary = cx.primary.clone();
    let m = morphism_out(cx, &primary, 3, 2);
    let s = cx.other_shape();
    let n = morphism_out(cx, &s, 3, 2);
    let (p, q) = (m.src(), n.src());
    let (x, y) = (p.space(), q.space());

    let pq = obj_tensor(cat, p, q)?;
    expect_eq(&**pq.space(), &space_tensor(x, y)?, "projection of the tensor of objects")?;
    let one = unit_object(cat, &cx.group);
    expect_eq(&**one.space(), &BornCoarseSpace::point(cx.group.clone()), "projection of the unit")?;
    let mn = mor_tensor(cat, &m, &n)?;
    let pair = MapTerm::PairMap(Box::new(m.map().term().clone()), Box::new(n.map().term().clone()));
    expect_eq(mn.map().term(), &pair, "projection of the tensor of morphisms (term)")?;
    expect_eq(mn.map(), &m.map().tensor(n.map())?, "projection of the tensor of morphisms")?;

    let z_shape = cx.other_shape();
    let r = cx.obj(&cx.space(&z_shape), 2, 2);
    let (assoc, unitor, symm) = space_constraints(x, y, r.space())?;
    let a = constraint_assoc(cat, p, q, &r)?;
    let u = constraint_unit(cat, p)?;
    let s = constraint_symm(cat, p, q)?;
    for (got, want, term, what) in [
        (&a, &assoc, MapTerm::Assoc, "associator"),
        (&u, &unitor, MapTerm::Proj2, "unitor"),
        (&s, &symm, MapTerm::Swap, "symmetry"),
    ] {
        expect_eq(got.map().term(), &term, what)?;
        expect_eq(got.map(), want, what)?;
        got.recheck(cat)?;
        is_iso(cat, &got.assembled(cat), what)?;
    }
    Ok(())
}

pub fn exchange<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s1 = cx.primary.clone();
    let s2 = cx.other_shape();
    let p = cx.obj(&cx.space(&s1), 4, 2);
    let q = cx.obj(&cx.space(&s2), 3, 2);
    let (f, _) = cx.map_from(&s1);
    let (g, _) = cx.map_from(&s2);
    cx.tag_map(&f, &support(&p));
    cx.tag_map(&g, &support(&q));
    let e = exchange_map(cat, &f, &g, &p, &q)?;
    is_iso(cat, &e, "exchange comparison")
}

pub fn bi_additivity<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s1 = cx.primary.clone();
    let s2 = cx.other_shape();
    let x = cx.space(&s1);
    let m0 = cx.obj(&x, 3, 2);
    let m1 = cx.obj(&x, 3, 2);
    let n = cx.obj(&cx.space(&s2), 3, 2);
    let side = if cx.gen.coin(0.5) { Side::Left } else { Side::Right };
    cx.tags.push(format!("side:{side:?}").to_lowercase());
    let b = bi_additivity_map(cat, &m0, &m1, &n, side)?;
    is_iso(cat, &b, "bi-additivity comparison")
}

pub fn cocartesian<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s0 = cx.primary.clone();
    let p = cx.obj(&cx.space(&s0), 4, 2);
    let (f, s1) = cx.map_from(&s0);
    let (h_prime, s2) = cx.map_from(&s1);
    cx.tag_map(&f, &support(&p));
    let h = h_prime.compose(&f)?;
    let q = cx.obj(&cx.space(&s2), 4, 2);
    let test = cx.gen.groth_morphism(cat, &h, &p, &q);
    let lift = cocartesian_lift(cat, &f, &p);
    lift.recheck(cat)?;
    let fill = cocartesian_verify(cat, &lift, &test, Some(&h_prime))?;
    expect_eq(fill.map(), &h_prime, "fill-in lies over the given factor")?;
    match cocartesian_verify(cat, &lift, &test, None) {
        Err(ControlledError::NoFactorization) => Ok(()),
        _ => Err(Breach::law("a missing factorization was not reported")),
    }
}

// ---------------------------------------------------------------- category

pub fn associativity<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s0 = cx.primary.clone();
    let p0 = cx.obj(&cx.space(&s0), 4, 2);
    let (f1, s1) = cx.map_from(&s0);
    let p1 = cx.obj(&cx.space(&s1), 4, 2);
    let (f2, s2) = cx.map_from(&s1);
    let p2 = cx.obj(&cx.space(&s2), 4, 2);
    let (f3, s3) = cx.map_from(&s2);
    let p3 = cx.obj(&cx.space(&s3), 4, 2);
    let m1 = cx.gen.groth_morphism(cat, &f1, &p0, &p1);
    let m2 = cx.gen.groth_morphism(cat, &f2, &p1, &p2);
    let m3 = cx.gen.groth_morphism(cat, &f3, &p2, &p3);
    let left = groth_compose(cat, &groth_compose(cat, &m3, &m2)?, &m1)?;
    let right = groth_compose(cat, &m3, &groth_compose(cat, &m2, &m1)?)?;
    expect_eq(&left, &right, "associativity")?;
    left.recheck(cat)?;
    Ok(())
}

pub fn identity<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let primary = cx.primary.clone();
    let m = morphism_out(cx, &primary, 4, 3);
    expect_eq(&groth_compose(cat, &groth_identity(cat, m.dst()), &m)?, &m, "left identity")?;
    expect_eq(&groth_compose(cat, &m, &groth_identity(cat, m.src()))?, &m, "right identity")
}

pub fn bilinearity<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let x = cx.space(&cx.primary.clone());
    let (m, n, l) = (cx.obj(&x, 4, 2), cx.obj(&x, 4, 2), cx.obj(&x, 4, 2));
    let (phi1, phi2) = (cx.mor(&m, &n), cx.mor(&m, &n));
    let (psi1, psi2) = (cx.mor(&n, &l), cx.mor(&n, &l));
    let lhs = mor_compose(cat, &psi1, &mor_add(cat, &phi1, &phi2)?)?;
    let rhs = mor_add(cat, &mor_compose(cat, &psi1, &phi1)?, &mor_compose(cat, &psi1, &phi2)?)?;
    expect_eq(&lhs, &rhs, "composition is additive in the first argument")?;
    let lhs = mor_compose(cat, &mor_add(cat, &psi1, &psi2)?, &phi1)?;
    let rhs = mor_add(cat, &mor_compose(cat, &psi1, &phi1)?, &mor_compose(cat, &psi2, &phi1)?)?;
    expect_eq(&lhs, &rhs, "composition is additive in the second argument")?;

    let primary = cx.primary.clone();
    let (a1, target) = morphism_out_to(cx, &primary, 3, 2);
    let fp = Arc::new(pushforward_obj(cat, a1.map(), a1.src()));
    let phi = cx.mor(&fp, a1.dst());
    let a2 = GrothMorphism::from_assembled(cat, a1.map().clone(), a1.src().clone(), &phi);
    let (g, s2) = cx.map_from(&target);
    let r = cx.obj(&cx.space(&s2), 3, 2);
    let b = cx.gen.groth_morphism(cat, &g, a1.dst(), &r);
    let lhs = groth_compose(cat, &b, &groth_add(cat, &a1, &a2)?)?;
    let rhs = groth_add(cat, &groth_compose(cat, &b, &a1)?, &groth_compose(cat, &b, &a2)?)?;
    expect_eq(&lhs, &rhs, "composition in the total category is additive")
}

pub fn witness_containment<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let x = cx.space(&cx.primary.clone());
    let (m, n, l) = (cx.obj(&x, 6, 2), cx.obj(&x, 6, 2), cx.obj(&x, 6, 2));
    let phi = cx.mor(&m, &n);
    let psi = cx.mor(&n, &l);
    let comp = mor_compose(cat, &psi, &phi)?;
    let bound = ent_compose(psi.witness(), phi.witness(), x.ambient());
    // An empty hull is witnessed by the diagonal, which adds no pairs.
    let mut pairs: Vec<(Point, Point)> = match comp.witness() {
        Entourage::FinitePairs(ps) => ps.iter().cloned().collect(),
        Entourage::Diagonal if comp.entries().is_empty() => Vec::new(),
        other => return Err(Breach::law(format!("unexpected witness shape {other}"))),
    };
    pairs.extend(comp.entries().keys().cloned());
    for (a, b) in pairs {
        if !bound.contains(x.ambient(), &a, &b) {
            return Err(Breach::law(format!("witness pair ({a}, {b}) is outside the composite entourage")));
        }
    }
    Ok(())
}

pub fn functoriality<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s0 = cx.primary.clone();
    let x = cx.space(&s0);
    let (m, n) = (cx.obj(&x, 5, 2), cx.obj(&x, 5, 2));
    let phi = cx.mor(&m, &n);
    let (f, s1) = cx.map_from(&s0);
    let (g, _) = cx.map_from(&s1);
    let gf = g.compose(&f)?;

    let flat = pushforward_mor(cat, &gf, &phi);
    let nested = pushforward_mor(cat, &g, &pushforward_mor(cat, &f, &phi));
    expect_eq(flat.src().fibers(), nested.src().fibers(), "fibers of the two pushforwards")?;
    let r_m = reassociate(cat, &f, &g, &m)?;
    let r_n = reassociate(cat, &f, &g, &n)?;
    is_iso(cat, &r_m, "regrouping")?;
    let lhs = mor_compose(cat, &nested, &r_m)?;
    let rhs = mor_compose(cat, &r_n, &flat)?;
    expect_eq(&lhs, &rhs, "pushforward along a composite")?;
    if flat == nested {
        cx.tags.push("literal".into());
    }
    let id = SpaceMorphism::identity(x.clone());
    expect_eq(&pushforward_mor(cat, &id, &phi), &phi, "pushforward along the identity")
}

pub fn cocycle_preservation<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s0 = cx.primary.clone();
    let x = cx.space(&s0);
    let (m, n) = (cx.obj(&x, 4, 2), cx.obj(&x, 4, 2));
    let other = cx.other_shape();
    let k = cx.obj(&cx.space(&other), 3, 2);
    let (f, _) = cx.map_from(&s0);
    let recheck_obj = |o: &ControlledObject<A>| obj_check(cat, o.space().clone(), o.fibers().clone(), o.rho_table().to_vec());

    let sum = Arc::new(obj_biproduct(cat, &[&m, &n])?);
    recheck_obj(&sum)?;
    recheck_obj(&pushforward_obj(cat, &f, &m))?;
    recheck_obj(&obj_tensor(cat, &m, &k)?)?;
    recheck_obj(&unit_object(cat, &cx.group))?;

    let phi = cx.mor(&m, &n);
    let psi = cx.mor(&n, &m);
    let chi = cx.mor(&m, &n);
    for (out, what) in [
        (mor_compose(cat, &psi, &phi)?, "composite"),
        (mor_add(cat, &phi, &chi)?, "sum"),
        (mor_negate(cat, &phi), "negative"),
        (pushforward_mor(cat, &f, &phi), "pushforward"),
        (biproduct_injection(cat, &[&m, &n], &sum, &m, 0), "injection"),
        (biproduct_projection(cat, &[&m, &n], &sum, &n, 1), "projection"),
    ] {
        mor_check(cat, out.src().clone(), out.dst().clone(), out.entries().clone())
            .map_err(|e| Breach::law(format!("{what}: {e}")))?;
    }
    let a = GrothMorphism::from_assembled(cat, SpaceMorphism::identity(x.clone()), m.clone(), &phi);
    let b = morphism_out(cx, &other, 3, 2);
    mor_tensor(cat, &a, &b)?.recheck(cat)?;
    Ok(())
}

// ---------------------------------------------------------------- oracle

fn finite_other<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> Shape {
    let finite: Vec<Shape> = cx.shapes.iter().filter(|s| !s.has_line() && !s.is_tensor()).cloned().collect();
    if finite.is_empty() {
        Shape::Whole4
    } else {
        cx.gen.pick(&finite).clone()
    }
}

pub fn oracle_composition<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let x = cx.space(&cx.primary.clone());
    let (m, n, l) = (cx.obj(&x, 6, 2), cx.obj(&x, 6, 2), cx.obj(&x, 6, 2));
    let phi = cx.mor(&m, &n);
    let psi = cx.mor(&n, &l);
    let engine = mor_compose(cat, &psi, &phi)?;
    let k = oracle::check_composition(cat, &psi, &phi, &engine).map_err(Breach::law)?;
    cx.tags.push(format!("subsets:{k}"));
    Ok(())
}

pub fn oracle_pushforward<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let s0 = cx.primary.clone();
    let x = cx.space(&s0);
    let (m, n) = (cx.obj(&x, 6, 2), cx.obj(&x, 6, 2));
    let phi = cx.mor(&m, &n);
    let (f, _) = cx.map_from(&s0);
    cx.tag_map(&f, &support(&m));
    let engine = pushforward_mor(cat, &f, &phi);
    oracle::check_pushforward(cat, &f, &phi, &engine).map_err(Breach::law)?;
    Ok(())
}

pub fn oracle_tensor<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let x = cx.space(&cx.primary.clone());
    let other = finite_other(cx);
    let y = cx.space(&other);
    let (m, m2) = (cx.obj(&x, 3, 2), cx.obj(&x, 3, 2));
    let (n, n2) = (cx.obj(&y, 3, 2), cx.obj(&y, 3, 2));
    let phi = cx.mor(&m, &m2);
    let psi = cx.mor(&n, &n2);
    let a = GrothMorphism::from_assembled(cat, SpaceMorphism::identity(x), m, &phi);
    let b = GrothMorphism::from_assembled(cat, SpaceMorphism::identity(y), n, &psi);
    let engine = mor_tensor(cat, &a, &b)?;
    oracle::check_tensor(cat, &a, &b, &engine).map_err(Breach::law)?;
    Ok(())
}

/// A two-point Whole-coarse space; the nontrivial element of `Z/2` swaps
/// the points, any other group acts trivially.
pub fn two_point_space(group: &Arc<FiniteGroup>) -> Arc<BornCoarseSpace> {
    let set = AmbientSet::numbered(2);
    let action = if group.order() == 2 {
        GAction::check(group.clone(), set, ActionKind::Table(vec![vec![0, 1], vec![1, 0]])).unwrap()
    } else {
        GAction::trivial(group.clone(), set)
    };
    Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
}

/// Compares the pointwise equivariance test of `mor_check` with the
/// functorial condition on equivariant and perturbed candidates.
pub fn equivariance_placement<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let x = two_point_space(&cx.group);
    let (m, n) = (cx.obj(&x, 2, 3), cx.obj(&x, 2, 3));
    let mut candidate = cx.mor(&m, &n).entries().clone();
    if cx.gen.coin(0.5) {
        let xs = support(&m);
        let ys = support(&n);
        let (to, from) = (cx.gen.pick(&ys).clone(), cx.gen.pick(&xs).clone());
        let bump = cat.random_mor(cx.gen.rng(), m.fiber(&from).unwrap(), n.fiber(&to).unwrap());
        let next = match candidate.remove(&(to.clone(), from.clone())) {
            Some(e) => cat.add(&e, &bump),
            None => bump,
        };
        if !cat.is_zero(&next) {
            candidate.insert((to, from), next);
        }
    }
    let pointwise = match mor_check(cat, m.clone(), n.clone(), candidate.clone()) {
        Ok(_) => true,
        Err(ControlledError::NotEquivariant { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    let functorial = oracle::functorial_equivariance(cat, &m, &n, &candidate).map_err(Breach::law)?;
    cx.tags.push(if functorial { "equivariant" } else { "not_equivariant" }.into());
    if pointwise != functorial {
        return Err(Breach::law(format!(
            "pointwise test says {pointwise}, functorial condition says {functorial}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- instance data

pub fn instance_law<A: AdditiveCategory>(cx: &mut Ctx<'_, A>, law: &str) -> LawResult {
    Ok(run_instance_law(cx.cat, &cx.group, law, cx.gen.rng())?)
}

pub fn strict_action<A: AdditiveCategory>(cx: &mut Ctx<'_, A>) -> LawResult {
    let cat = cx.cat;
    let all: Vec<_> = cx.group.elements().collect();
    let mut objs = Vec::new();
    for _ in 0..4 {
        objs.push(cat.random_obj(cx.gen.rng(), 3, &[]));
    }
    let mut mors = Vec::new();
    for i in 0..4 {
        let (a, b) = (&objs[i], &objs[(i + 1) % 4]);
        mors.push(cat.random_mor(cx.gen.rng(), a, b));
    }
    strictness(cat, &cx.group, &objs, &mors)?;
    cx.tags.push(format!("pairs:{}", all.len() * all.len()));
    Ok(())
}

/// Evaluates the space morphism `term` between `src` and `dst` and
/// reports the error class, used by the negative suite.
pub fn map_rejection(term: MapTerm, src: Arc<BornCoarseSpace>, dst: Arc<BornCoarseSpace>) -> Option<MapError> {
    morphism_check(term, src, dst).err()
}
