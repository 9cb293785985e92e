use std::collections::BTreeMap;
use std::sync::Arc;

use bornctl::additive::{AdditiveCategory, MatCat, ShiftCat};
use bornctl::coarse::{morphism_check, BornCoarseSpace, Bornology, CoarseStructure, MapTerm, SpaceMorphism};
use bornctl::controlled::{mor_is_iso, obj_check, ControlledObject};
use bornctl::groth::{
    cocartesian_lift, cocartesian_verify, constraint_assoc, constraint_symm, constraint_unit, exchange_map, groth_check,
    groth_compose, obj_tensor, unit_object, GrothObject,
};
use bornctl::group::{FiniteGroup, GAction};
use bornctl::matrix::Matrix;
use bornctl::ring::{IntMod, Integers, Rationals, Ring};
use bornctl::set::{AmbientSet, Point};
use bornctl::verify::fixtures::{group_named, Shape};
use bornctl::verify::gen::{GenParams, Generator};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gen_obj<A: AdditiveCategory>(cat: &A, shape: &Shape, group: &Arc<FiniteGroup>, seed: u64) -> Arc<GrothObject<A>> {
    let mut g = Generator::new(seed, "total", 0, GenParams::default());
    let space = shape.build(group);
    Arc::new(g.object(cat, &space, 4, 2))
}

fn unit_object_is_valid<A: AdditiveCategory>(cat: &A, group: &Arc<FiniteGroup>) {
    let one = unit_object(cat, group);
    let star = Point::Label(0);
    assert_eq!(one.support().collect::<Vec<_>>(), vec![&star]);
    assert_eq!(one.fiber(&star), Some(&cat.unit()));
    obj_check(cat, one.space().clone(), one.fibers().clone(), one.rho_table().to_vec()).unwrap();
}

#[test]
fn unit_object_validates_in_every_instance() {
    let z2 = group_named("Z2").unwrap();
    let z3 = group_named("Z3").unwrap();
    unit_object_is_valid(&MatCat::new(IntMod::new(2).unwrap()), &z2);
    unit_object_is_valid(&MatCat::new(Integers), &z3);
    unit_object_is_valid(&MatCat::new(Rationals), &z2);
    unit_object_is_valid(&ShiftCat::new(z2.clone(), "Z2".into(), Integers), &z2);
    unit_object_is_valid(&ShiftCat::new(z3.clone(), "Z3".into(), Integers), &z3);
}

fn constraints_are_isos<A: AdditiveCategory>(cat: &A, group: &Arc<FiniteGroup>) {
    let shapes = [Shape::Whole4, Shape::Classes6, Shape::Point];
    for (i, s) in shapes.iter().enumerate() {
        let p = gen_obj(cat, s, group, i as u64);
        let q = gen_obj(cat, &shapes[(i + 1) % 3], group, 10 + i as u64);
        let r = gen_obj(cat, &shapes[(i + 2) % 3], group, 20 + i as u64);
        for m in [
            constraint_assoc(cat, &p, &q, &r).unwrap(),
            constraint_unit(cat, &p).unwrap(),
            constraint_symm(cat, &p, &q).unwrap(),
        ] {
            m.recheck(cat).unwrap();
            assert!(mor_is_iso(cat, &m.assembled(cat)).is_some(), "{m:?}");
        }
    }
}

#[test]
fn structure_maps_are_invertible() {
    let z2 = group_named("Z2").unwrap();
    let z3 = group_named("Z3").unwrap();
    constraints_are_isos(&MatCat::new(IntMod::new(2).unwrap()), &z2);
    constraints_are_isos(&MatCat::new(Integers), &z3);
    constraints_are_isos(&MatCat::new(Rationals), &group_named("trivial").unwrap());
    constraints_are_isos(&ShiftCat::new(z2.clone(), "Z2".into(), Integers), &z2);
}

#[test]
fn tensor_ranks_multiply_pointwise() {
    let cat = MatCat::new(Integers);
    let z2 = group_named("Z2").unwrap();
    let p = gen_obj(&cat, &Shape::Whole4, &z2, 3);
    let q = gen_obj(&cat, &Shape::Classes6, &z2, 4);
    let pq = obj_tensor(&cat, &p, &q).unwrap();
    let mut expected = BTreeMap::new();
    for (x, a) in p.fibers() {
        for (y, b) in q.fibers() {
            expected.insert(Point::pair(x.clone(), y.clone()), a * b);
        }
    }
    assert_eq!(*pq.fibers(), expected);
    pq.recheck(&cat).unwrap();
}

/// `e_i ⊗ f_k ↦ f_k ⊗ e_i`, built from basis vectors rather than indices.
fn swap_oracle(n: usize, m: usize) -> Matrix<num_bigint::BigInt> {
    let ring = Integers;
    let e = |i: usize, d: usize| Matrix::from_fn(d, 1, |r, _| ring.from_i64((r == i) as i64));
    let mut cols = Vec::new();
    for i in 0..n {
        for k in 0..m {
            cols.push(e(k, m).kron(&ring, &e(i, n)));
        }
    }
    Matrix::from_fn(n * m, n * m, |r, c| cols[c].get(r, 0).clone())
}

#[test]
fn symmetry_blocks_are_swap_matrices() {
    let cat = MatCat::new(Integers);
    let t = group_named("trivial").unwrap();
    let p = gen_obj(&cat, &Shape::Whole4, &t, 5);
    let q = gen_obj(&cat, &Shape::Classes6, &t, 6);
    let s = constraint_symm(&cat, &p, &q).unwrap();
    assert!(!s.entries().is_empty());
    for ((to, from), block) in s.entries() {
        assert_eq!(to.first(), from.second());
        let (n, m) = (p.fiber(from.first().unwrap()).unwrap(), q.fiber(from.second().unwrap()).unwrap());
        assert_eq!(*block, swap_oracle(*n, *m));
    }
}

fn finite(n: usize, group: &Arc<FiniteGroup>) -> Arc<BornCoarseSpace> {
    let action = GAction::trivial(group.clone(), AmbientSet::numbered(n));
    Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
}

fn ranked<R: Ring>(cat: &MatCat<R>, space: &Arc<BornCoarseSpace>, ranks: &[usize]) -> Arc<ControlledObject<MatCat<R>>> {
    let fibers: BTreeMap<Point, usize> = ranks.iter().enumerate().map(|(i, &r)| (Point::Label(i as u32), r)).collect();
    let rho = vec![fibers.iter().map(|(x, &r)| (x.clone(), Matrix::identity(cat.ring(), r))).collect()];
    Arc::new(obj_check(cat, space.clone(), fibers, rho).unwrap())
}

/// A random surjection `2k → k` hitting every target exactly twice.
fn two_to_one(rng: &mut ChaCha8Rng, k: u32) -> Vec<u32> {
    let mut images: Vec<u32> = (0..k).flat_map(|i| [i, i]).collect();
    images.shuffle(rng);
    images
}

#[test]
fn exchange_over_two_to_one_maps_is_invertible() {
    let cat = MatCat::new(Integers);
    let t = Arc::new(FiniteGroup::trivial());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (x4, x2) = (finite(4, &t), finite(2, &t));
        let (x6, x3) = (finite(6, &t), finite(3, &t));
        let f = morphism_check(MapTerm::Table(two_to_one(&mut rng, 2)), x4.clone(), x2).unwrap();
        let g = morphism_check(MapTerm::Table(two_to_one(&mut rng, 3)), x6.clone(), x3).unwrap();
        let p_ranks: Vec<usize> = (0..4).map(|_| rng.random_range(0..3)).collect();
        let q_ranks: Vec<usize> = (0..6).map(|_| rng.random_range(0..3)).collect();
        let p = ranked(&cat, &x4, &p_ranks);
        let q = ranked(&cat, &x6, &q_ranks);
        let ex = exchange_map(&cat, &f, &g, &p, &q).unwrap();
        ex.recheck(&cat).unwrap();
        assert!(mor_is_iso(&cat, &ex).is_some());
        for ((to, _), block) in ex.entries() {
            let (y1, y2) = (to.first().unwrap(), to.second().unwrap());
            let over = |img: &SpaceMorphism, ranks: &[usize], y: &Point| -> usize {
                (0..ranks.len()).filter(|&i| img.apply(&Point::Label(i as u32)) == *y).map(|i| ranks[i]).sum()
            };
            let side = over(&f, &p_ranks, y1) * over(&g, &q_ranks, y2);
            assert_eq!((block.rows(), block.cols()), (side, side));
        }
    }
}

#[test]
fn cocartesian_fill_in_is_recovered_over_z6() {
    let ring = IntMod::new(6).unwrap();
    let cat = MatCat::new(ring);
    let t = Arc::new(FiniteGroup::trivial());
    let (x4, x2) = (finite(4, &t), finite(2, &t));
    let f = morphism_check(MapTerm::Table(vec![0, 1, 0, 1]), x4.clone(), x2.clone()).unwrap();
    let p = ranked(&cat, &x4, &[1, 2, 1, 0]);
    let lift = cocartesian_lift(&cat, &f, &p);
    lift.recheck(&cat).unwrap();
    let fp = lift.dst().clone();
    assert_eq!(fp.fiber(&Point::Label(0)), Some(&2));
    assert_eq!(fp.fiber(&Point::Label(1)), Some(&2));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let r = ranked(&cat, &x2, &[3, 1]);
    let mut entries = BTreeMap::new();
    for (y1, a) in r.fibers() {
        for (y0, b) in fp.fibers() {
            let m = Matrix::from_fn(*a, *b, |_, _| rng.random_range(0..6u64));
            entries.insert((y1.clone(), y0.clone()), m);
        }
    }
    let id = SpaceMorphism::identity(x2.clone());
    let fill = groth_check(&cat, id.clone(), fp.clone(), r.clone(), entries).unwrap();
    let test = groth_compose(&cat, &fill, &lift).unwrap();
    let recovered = cocartesian_verify(&cat, &lift, &test, Some(&id)).unwrap();
    assert_eq!(recovered, fill);
}
