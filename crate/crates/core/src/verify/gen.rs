//! Seeded generators for controlled objects and morphisms.
//!
//! Objects are built one orbit at a time: a fiber is chosen at an orbit
//! representative (invariant under its stabilizer), transported along the
//! orbit, and `ρ` is the induced cocycle of a random sign character of the
//! stabilizer, conjugated by random automorphisms of the fibers. Morphisms
//! are built one orbit of index pairs at a time: an entry at a representative
//! pair is averaged over the pair's stabilizer and then transported to the
//! rest of the orbit by the equivariance equation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::additive::AdditiveCategory;
use crate::coarse::{morphism_check, BornCoarseSpace, MapTerm, SpaceMorphism};
use crate::controlled::{pushforward_obj, ControlledMorphism, ControlledObject};
use crate::groth::GrothMorphism;
use crate::group::{FiniteGroup, GAction, GroupElem};
use crate::set::{AmbientSet, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_points: usize,
    pub max_rank: usize,
    pub max_radius: i64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_points: 6, max_rank: 3, max_radius: 4 }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    pub params: GenParams,
}

/// 64-bit FNV-1a; stable across platforms and toolchains.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

impl Generator {
    /// Independent stream for case `case` of law `law` under `seed`.
    pub fn new(seed: u64, law: &str, case: u64, params: GenParams) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&fnv1a(law).to_le_bytes());
        key[16..24].copy_from_slice(&case.to_le_bytes());
        Generator { rng: ChaCha8Rng::from_seed(key), params }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("pick from an empty list")
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// An object with at most `max_points` support points and fiber rank
    /// at most `max_rank`. Never zero when the window has an orbit that fits.
    pub fn object<A: AdditiveCategory>(
        &mut self,
        cat: &A,
        space: &Arc<BornCoarseSpace>,
        max_points: usize,
        max_rank: usize,
    ) -> ControlledObject<A> {
        let action = space.action();
        let group = space.group().clone();
        let mut orbits = orbits_in(action, &window(space.ambient(), self.params.max_radius));
        orbits.shuffle(&mut self.rng);
        let mut chosen: Vec<Vec<Point>> = Vec::new();
        let mut used = 0;
        for o in &orbits {
            if used + o.len() <= max_points && (chosen.is_empty() || self.rng.random_bool(0.5)) {
                used += o.len();
                chosen.push(o.clone());
            }
        }
        let mut fibers = BTreeMap::new();
        let mut rho = vec![BTreeMap::new(); group.order()];
        for orbit in chosen {
            self.seed_orbit(cat, action, &group, &orbit, max_rank, &mut fibers, &mut rho);
        }
        ControlledObject::from_parts(cat, space.clone(), fibers, rho)
    }

    #[allow(clippy::too_many_arguments)]
    fn seed_orbit<A: AdditiveCategory>(
        &mut self,
        cat: &A,
        action: &GAction,
        group: &FiniteGroup,
        orbit: &[Point],
        max_rank: usize,
        fibers: &mut BTreeMap<Point, A::Obj>,
        rho: &mut [BTreeMap<Point, A::Mor>],
    ) {
        let rep = &orbit[0];
        let stab = action.stabilizer(rep);
        // g_x with g_x · rep = x, the first such element in group order.
        let transport: BTreeMap<Point, GroupElem> = orbit
            .iter()
            .map(|x| (x.clone(), group.elements().find(|&g| action.act(g, rep) == *x).unwrap()))
            .collect();
        let base = cat.random_obj(&mut self.rng, max_rank, &stab);
        let chars = sign_characters(group, &stab);
        let chi = chars.choose(&mut self.rng).unwrap().clone();
        let mut twist = BTreeMap::new();
        let mut twist_inv = BTreeMap::new();
        for x in orbit {
            let a = cat.act_obj(transport[x], &base);
            let t = cat.random_auto(&mut self.rng, &a);
            twist_inv.insert(x.clone(), cat.inverse(&t).expect("random automorphism is invertible"));
            twist.insert(x.clone(), t);
            fibers.insert(x.clone(), a);
        }
        for g in group.elements() {
            let g_inv = group.inv(g);
            for x in orbit {
                let y = action.act(g_inv, x);
                // h = g_x⁻¹ g g_y fixes the representative.
                let h = group.mul(group.mul(group.inv(transport[x]), g), transport[&y]);
                let a = &fibers[x];
                let sign = if chi[&h] { cat.sign_diag(a, &|_| true) } else { cat.identity(a) };
                let r = cat.compose(&cat.act_mor(g, &twist[&y]), &cat.compose(&sign, &twist_inv[x]));
                rho[g.index()].insert(x.clone(), r);
            }
        }
    }

    /// An equivariant morphism `src → dst` (same space) supported in a
    /// randomly chosen cofinal entourage.
    pub fn morphism<A: AdditiveCategory>(
        &mut self,
        cat: &A,
        src: &Arc<ControlledObject<A>>,
        dst: &Arc<ControlledObject<A>>,
    ) -> ControlledMorphism<A> {
        let space = dst.space();
        let amb = space.ambient();
        let action = space.action();
        let group = space.group().clone();
        let ent = space.coarse().cofinal().at(self.rng.random_range(0..3));
        let mut seen = BTreeSet::new();
        let mut entries = BTreeMap::new();
        let mut inv_cache: BTreeMap<(GroupElem, Point), A::Mor> = BTreeMap::new();
        let mut rho_dst_inv = |g: GroupElem, x: &Point| -> A::Mor {
            inv_cache
                .entry((g, x.clone()))
                .or_insert_with(|| cat.inverse(dst.rho(g, x).unwrap()).expect("rho is invertible"))
                .clone()
        };
        for a in dst.support() {
            for b in src.support() {
                if seen.contains(&(a.clone(), b.clone())) || !ent.contains(amb, a, b) {
                    continue;
                }
                let orbit: Vec<(Point, Point)> = group.elements().map(|g| (action.act(g, a), action.act(g, b))).collect();
                seen.extend(orbit.iter().cloned());
                if !self.rng.random_bool(0.7) {
                    continue;
                }
                let (fa, fb) = (dst.fiber(a).unwrap(), src.fiber(b).unwrap());
                let psi = cat.random_mor(&mut self.rng, fb, fa);
                let mut avg = cat.zero(fb, fa);
                for k in group.elements().filter(|&k| orbit[k.index()] == (a.clone(), b.clone())) {
                    let term = cat.compose(&rho_dst_inv(k, a), &cat.compose(&cat.act_mor(k, &psi), src.rho(k, b).unwrap()));
                    avg = cat.add(&avg, &term);
                }
                for g in group.elements() {
                    let (ga, gb) = &orbit[g.index()];
                    if entries.contains_key(&(ga.clone(), gb.clone())) {
                        continue;
                    }
                    let e = cat.compose(&rho_dst_inv(g, ga), &cat.compose(&cat.act_mor(g, &avg), src.rho(g, gb).unwrap()));
                    entries.insert((ga.clone(), gb.clone()), e);
                }
            }
        }
        ControlledMorphism::from_parts(cat, src.clone(), dst.clone(), entries)
    }

    /// A random space morphism `src → dst`, or `None` when no candidate
    /// passed certification within the attempt budget.
    pub fn space_map(&mut self, src: &Arc<BornCoarseSpace>, dst: &Arc<BornCoarseSpace>) -> Option<SpaceMorphism> {
        for _ in 0..64 {
            let Some(term) = self.map_term(src.action(), dst.action()) else { continue };
            if let Ok(f) = morphism_check(term, src.clone(), dst.clone()) {
                return Some(f);
            }
        }
        None
    }

    fn map_term(&mut self, src: &GAction, dst: &GAction) -> Option<MapTerm> {
        match (src.set(), dst.set()) {
            (AmbientSet::Finite(_), AmbientSet::Finite(_)) => self.equivariant_table(src, dst),
            (AmbientSet::IntLine, AmbientSet::IntLine) => {
                let a = *[1i64, -1, 2, -2, 3].choose(&mut self.rng)?;
                let b = if src.is_trivial() && dst.is_trivial() { self.rng.random_range(-2..=2) } else { 0 };
                Some(MapTerm::Affine { a, b })
            }
            (AmbientSet::Pair(..), AmbientSet::Pair(..)) => {
                let left = self.map_term(src.at(&[0])?, dst.at(&[0])?)?;
                let right = self.map_term(src.at(&[1])?, dst.at(&[1])?)?;
                Some(MapTerm::PairMap(Box::new(left), Box::new(right)))
            }
            (AmbientSet::Pair(..), _) => {
                let (proj, side) = if self.rng.random_bool(0.5) { (MapTerm::Proj1, 0) } else { (MapTerm::Proj2, 1) };
                let inner = self.map_term(src.at(&[side])?, dst)?;
                Some(MapTerm::Compose(vec![inner, proj]))
            }
            (_, _) => {
                let fixed: Vec<Point> = window(dst.set(), 2)
                    .into_iter()
                    .filter(|p| dst.stabilizer(p).len() == dst.group().order())
                    .collect();
                Some(MapTerm::Const(fixed.choose(&mut self.rng)?.clone()))
            }
        }
    }

    /// `f(g·r) = g·y` on each orbit, with `y` fixed by the stabilizer of `r`.
    fn equivariant_table(&mut self, src: &GAction, dst: &GAction) -> Option<MapTerm> {
        let src_pts = src.set().points()?;
        let dst_pts = dst.set().points()?;
        let mut table = vec![u32::MAX; src_pts.len()];
        for orbit in orbits_in(src, &src_pts) {
            let r = &orbit[0];
            let stab = src.stabilizer(r);
            let allowed: Vec<&Point> = dst_pts
                .iter()
                .filter(|y| stab.iter().all(|&h| dst.act(h, y) == **y))
                .collect();
            let y = *allowed.choose(&mut self.rng)?;
            for g in src.group().elements() {
                let Point::Label(i) = src.act(g, r) else { return None };
                let Point::Label(j) = dst.act(g, y) else { return None };
                table[i as usize] = j;
            }
        }
        Some(MapTerm::Table(table))
    }

    /// A morphism in the total category over `f` from `p` to `q`.
    pub fn groth_morphism<A: AdditiveCategory>(
        &mut self,
        cat: &A,
        f: &SpaceMorphism,
        p: &Arc<ControlledObject<A>>,
        q: &Arc<ControlledObject<A>>,
    ) -> GrothMorphism<A> {
        let fp = Arc::new(pushforward_obj(cat, f, p));
        let phi = self.morphism(cat, &fp, q);
        GrothMorphism::from_assembled(cat, f.clone(), p.clone(), &phi)
    }
}

/// Points of the ambient set, with integer coordinates cut to `[-r, r]`.
pub fn window(amb: &AmbientSet, r: i64) -> Vec<Point> {
    match amb {
        AmbientSet::Finite(_) => amb.points().unwrap(),
        AmbientSet::IntLine => (-r..=r).map(Point::Int).collect(),
        AmbientSet::Pair(a, b) => {
            let right = window(b, r);
            window(a, r)
                .into_iter()
                .flat_map(|x| right.iter().map(move |y| Point::pair(x.clone(), y.clone())))
                .collect()
        }
    }
}

/// Orbits meeting `points`, each sorted, in order of their least element.
pub fn orbits_in(action: &GAction, points: &[Point]) -> Vec<Vec<Point>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let orbit = action.orbit(p);
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    out
}

/// All homomorphisms `H → {±1}` on the subgroup `h`, as the set of
/// elements sent to `-1`.
pub fn sign_characters(group: &FiniteGroup, h: &[GroupElem]) -> Vec<BTreeMap<GroupElem, bool>> {
    let n = h.len();
    (0u32..1 << n)
        .map(|mask| h.iter().enumerate().map(|(i, &g)| (g, mask >> i & 1 == 1)).collect::<BTreeMap<_, _>>())
        .filter(|chi| {
            h.iter()
                .all(|&a| h.iter().all(|&b| chi[&group.mul(a, b)] == (chi[&a] ^ chi[&b])))
        })
        .collect()
}

/// Samples one value from a fresh stream; a convenience for property tests.
pub fn stream_u64(seed: u64, law: &str, case: u64) -> u64 {
    Generator::new(seed, law, case, GenParams::default()).rng.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::{MatCat, ShiftCat};
    use crate::controlled::{mor_check, obj_check};
    use crate::ring::{IntMod, Integers};
    use crate::verify::fixtures::{default_shapes, group_named, Shape};

    #[test]
    fn characters_of_z2_and_z3() {
        let z2 = group_named("Z2").unwrap();
        let all2: Vec<_> = z2.elements().collect();
        assert_eq!(sign_characters(&z2, &all2).len(), 2);
        let z3 = group_named("Z3").unwrap();
        let all3: Vec<_> = z3.elements().collect();
        assert_eq!(sign_characters(&z3, &all3).len(), 1);
    }

    #[test]
    fn same_stream_same_object() {
        let cat = MatCat::new(Integers);
        let space = Shape::Whole4.build(&group_named("Z2").unwrap());
        let a = Generator::new(0, "x", 3, GenParams::default()).object(&cat, &space, 4, 3);
        let b = Generator::new(0, "x", 3, GenParams::default()).object(&cat, &space, 4, 3);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn generated_data_validates() {
        let z2 = group_named("Z2").unwrap();
        let mat = MatCat::new(Integers);
        let shift = ShiftCat::new(z2.clone(), "Z2".into(), IntMod::new(5).unwrap());
        for (case, shape) in default_shapes().iter().cycle().take(40).enumerate() {
            let space = shape.build(&z2);
            let mut gen = Generator::new(1, "validate", case as u64, GenParams::default());
            let m = gen.object(&mat, &space, 6, 3);
            obj_check(&mat, space.clone(), m.fibers().clone(), m.rho_table().to_vec()).unwrap();
            let (m, n) = (Arc::new(m), Arc::new(gen.object(&mat, &space, 6, 3)));
            let phi = gen.morphism(&mat, &m, &n);
            mor_check(&mat, m.clone(), n.clone(), phi.entries().clone()).unwrap();

            let s = Arc::new(gen.object(&shift, &space, 6, 2));
            obj_check(&shift, space.clone(), s.fibers().clone(), s.rho_table().to_vec()).unwrap();
            let t = Arc::new(gen.object(&shift, &space, 6, 2));
            let psi = gen.morphism(&shift, &s, &t);
            mor_check(&shift, s, t, psi.entries().clone()).unwrap();
        }
    }

    #[test]
    fn maps_are_found_between_finite_fixtures() {
        let z2 = group_named("Z2").unwrap();
        let mut gen = Generator::new(2, "maps", 0, GenParams::default());
        let w = Shape::Whole4.build(&z2);
        let c = Shape::Classes6.build(&z2);
        assert!(gen.space_map(&c, &w).is_some());
        assert!(gen.space_map(&w, &w).is_some());
    }
}
