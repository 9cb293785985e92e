use std::sync::Arc;

use bornctl::additive::{AdditiveCategory, MatCat, ShiftCat};
use bornctl::coarse::{ent_invert, ent_saturate, Entourage, PairSet};
use bornctl::controlled::{mor_check, obj_check};
use bornctl::matrix::Matrix;
use bornctl::ring::{IntMod, Integers, Ring};
use bornctl::set::Point;
use bornctl::verify::fixtures::{default_shapes, group_named, Shape};
use bornctl::verify::gen::{GenParams, Generator};
use bornctl::verify::report::CaseConfig;
use bornctl::verify::suites::{run_case, Outcome};
use proptest::prelude::*;
use serde_json::json;

const GROUPS: [&str; 3] = ["trivial", "Z2", "Z3"];

fn shape_strategy() -> impl Strategy<Value = Shape> {
    prop::sample::select(default_shapes())
}

fn generated_data_validates<A: AdditiveCategory>(cat: &A, shape: &Shape, group: &str, seed: u64) {
    let group = group_named(group).unwrap();
    let space = shape.build(&group);
    let mut g = Generator::new(seed, "prop", 0, GenParams::default());
    let m = Arc::new(g.object(cat, &space, 6, 3));
    let n = Arc::new(g.object(cat, &space, 6, 3));
    let m2 = obj_check(cat, space.clone(), m.fibers().clone(), m.rho_table().to_vec()).unwrap();
    assert_eq!(m2, *m);
    let phi = g.morphism(cat, &m, &n);
    mor_check(cat, m, n, phi.entries().clone()).unwrap();
}

fn matrix(n: usize, m: usize) -> impl Strategy<Value = Matrix<u64>> {
    prop::collection::vec(0..7u64, n * m).prop_map(move |v| Matrix::from_vec(n, m, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_objects_and_morphisms_validate(seed in any::<u64>(), shape in shape_strategy(), gi in 0..3usize) {
        generated_data_validates(&MatCat::new(Integers), &shape, GROUPS[gi], seed);
        generated_data_validates(&MatCat::new(IntMod::new(2).unwrap()), &shape, GROUPS[gi], seed);
    }

    #[test]
    fn shift_instances_generate_valid_data(seed in any::<u64>(), shape in shape_strategy()) {
        let z2 = group_named("Z2").unwrap();
        generated_data_validates(&ShiftCat::new(z2, "Z2".into(), Integers), &shape, "Z2", seed);
    }

    #[test]
    fn generation_is_a_function_of_the_seed(seed in any::<u64>(), case in 0..1000u64) {
        let cat = MatCat::new(Integers);
        let space = Shape::Classes6.build(&group_named("Z3").unwrap());
        let a = Generator::new(seed, "det", case, GenParams::default()).object(&cat, &space, 6, 3);
        let b = Generator::new(seed, "det", case, GenParams::default()).object(&cat, &space, 6, 3);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn inverting_twice_is_the_identity(pairs in prop::collection::btree_set((0..6u32, 0..6u32), 0..12)) {
        let ps: PairSet = pairs.into_iter().map(|(a, b)| (Point::Label(a), Point::Label(b))).collect();
        let u = Entourage::FinitePairs(ps);
        prop_assert_eq!(ent_invert(&ent_invert(&u)), u);
    }

    #[test]
    fn saturation_is_idempotent(pairs in prop::collection::btree_set((0..6u32, 0..6u32), 1..12), gi in 0..3usize) {
        let group = group_named(GROUPS[gi]).unwrap();
        let space = Shape::Classes6.build(&group);
        let ps: PairSet = pairs.into_iter().map(|(a, b)| (Point::Label(a), Point::Label(b))).collect();
        let once = ent_saturate(space.action(), &Entourage::FinitePairs(ps));
        let twice = ent_saturate(space.action(), &once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn kronecker_mixed_product(a in matrix(2, 3), b in matrix(2, 2), c in matrix(3, 2), d in matrix(2, 1)) {
        let r = IntMod::new(7).unwrap();
        let lhs = a.kron(&r, &b).mul(&r, &c.kron(&r, &d));
        let rhs = a.mul(&r, &c).kron(&r, &b.mul(&r, &d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn biproduct_maps_split(ranks in prop::collection::vec(0..4usize, 1..5)) {
        let cat = MatCat::new(Integers);
        for i in 0..ranks.len() {
            for j in 0..ranks.len() {
                let pi = cat.compose(&cat.projection(&ranks, i), &cat.injection(&ranks, j));
                let want = if i == j { cat.identity(&ranks[i]) } else { cat.zero(&ranks[j], &ranks[i]) };
                prop_assert_eq!(pi, want);
            }
        }
        let total = cat.sum_obj(&ranks);
        let sum = (0..ranks.len()).fold(cat.zero(&total, &total), |acc, j| {
            cat.add(&acc, &cat.compose(&cat.injection(&ranks, j), &cat.projection(&ranks, j)))
        });
        prop_assert!(sum.is_identity(&Integers));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn category_laws_hold_for_arbitrary_seeds(
        seed in any::<u64>(),
        case in 0..10_000u64,
        law in prop::sample::select(vec!["associativity", "identity", "bilinearity", "witness_containment"]),
        shape in shape_strategy(),
        gi in 0..3usize,
        ring in prop::sample::select(vec![json!({"kind": "int"}), json!({"kind": "mod", "n": 3}), json!({"kind": "rat"})]),
    ) {
        let config = CaseConfig {
            instance: json!({"instance": "mat", "ring": ring}),
            group: GROUPS[gi].into(),
            shape: shape.to_string(),
            shapes: vec![shape.to_string()],
            max_points: 6,
            max_rank: 3,
            max_radius: 4,
        };
        let r = run_case("category", law, &config, seed, case).unwrap();
        prop_assert!(matches!(r.outcome, Outcome::Pass), "{:?}", r.outcome);
    }

    #[test]
    fn coherence_holds_for_arbitrary_seeds(
        seed in any::<u64>(),
        law in prop::sample::select(vec!["pentagon", "triangle", "inverse", "hexagon"]),
        shape in shape_strategy(),
    ) {
        let config = CaseConfig {
            instance: json!({"instance": "shift", "group": "Z2", "ring": {"kind": "int"}}),
            group: "Z2".into(),
            shape: shape.to_string(),
            shapes: vec![shape.to_string()],
            max_points: 6,
            max_rank: 3,
            max_radius: 4,
        };
        let r = run_case("coherence", law, &config, seed, 0).unwrap();
        prop_assert!(matches!(r.outcome, Outcome::Pass), "{:?}", r.outcome);
    }
}

#[test]
fn integers_mod_n_wrap() {
    let r = IntMod::new(6).unwrap();
    assert_eq!(r.add(&5, &4), 3);
    assert_eq!(r.neg(&1), 5);
    assert_eq!(r.mul(&4, &3), 0);
}
