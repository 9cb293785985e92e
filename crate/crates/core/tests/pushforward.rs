use std::collections::BTreeMap;
use std::sync::Arc;

use bornctl::additive::MatCat;
use bornctl::coarse::{morphism_check, BornCoarseSpace, Bornology, CoarseStructure, MapTerm};
use bornctl::controlled::{mor_check, obj_check, pushforward_mor, pushforward_obj, ControlledObject};
use bornctl::group::{FiniteGroup, GAction};
use bornctl::matrix::Matrix;
use bornctl::ring::{IntMod, Ring};
use bornctl::set::{AmbientSet, Point};
use bornctl::verify::fixtures::{group_named, Shape};
use bornctl::verify::gen::{GenParams, Generator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finite(n: usize) -> Arc<BornCoarseSpace> {
    let action = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::numbered(n));
    Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
}

fn ranked<R: Ring>(cat: &MatCat<R>, space: &Arc<BornCoarseSpace>, ranks: &[usize]) -> Arc<ControlledObject<MatCat<R>>> {
    let fibers: BTreeMap<Point, usize> =
        ranks.iter().enumerate().filter(|(_, &r)| r > 0).map(|(i, &r)| (Point::Label(i as u32), r)).collect();
    let rho = vec![fibers.iter().map(|(x, &r)| (x.clone(), Matrix::identity(cat.ring(), r))).collect()];
    Arc::new(obj_check(cat, space.clone(), fibers, rho).unwrap())
}

#[test]
fn constant_map_collects_total_rank() {
    let cat = MatCat::new(IntMod::new(3).unwrap());
    for (seed, group) in ["trivial", "Z2", "Z3"].into_iter().enumerate() {
        let group = group_named(group).unwrap();
        let space = Shape::Classes6.build(&group);
        let point = Shape::Point.build(&group);
        let mut g = Generator::new(seed as u64, "const", 0, GenParams::default());
        let m = g.object(&cat, &space, 6, 3);
        let f = morphism_check(MapTerm::Const(Point::Label(0)), space, point).unwrap();
        let fm = pushforward_obj(&cat, &f, &m);
        let total: usize = m.fibers().values().sum();
        assert_eq!(fm.fiber(&Point::Label(0)).copied().unwrap_or(0), total);
        fm.recheck(&cat).unwrap();
    }
}

#[test]
fn parity_map_sums_even_and_odd_fibers() {
    let cat = MatCat::new(IntMod::new(5).unwrap());
    let (x6, x2) = (finite(6), finite(2));
    let ranks = [1, 2, 0, 3, 2, 1];
    let m = ranked(&cat, &x6, &ranks);
    let f = morphism_check(MapTerm::Table(vec![0, 1, 0, 1, 0, 1]), x6, x2).unwrap();
    let fm = pushforward_obj(&cat, &f, &m);
    assert_eq!(fm.fiber(&Point::Label(0)), Some(&(1 + 0 + 2)));
    assert_eq!(fm.fiber(&Point::Label(1)), Some(&(2 + 3 + 1)));
}

#[test]
fn pushed_morphism_matches_hand_assembled_blocks() {
    let ring = IntMod::new(7).unwrap();
    let cat = MatCat::new(ring);
    let (x4, x2) = (finite(4), finite(2));
    let (src_ranks, dst_ranks) = ([2, 1, 1, 3], [1, 2, 2, 1]);
    let m = ranked(&cat, &x4, &src_ranks);
    let n = ranked(&cat, &x4, &dst_ranks);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut entries = BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            if rng.random_bool(0.6) {
                let e = Matrix::from_fn(dst_ranks[i], src_ranks[j], |_, _| rng.random_range(0..7u64));
                entries.insert((Point::Label(i as u32), Point::Label(j as u32)), e);
            }
        }
    }
    let phi = mor_check(&cat, m, n, entries.clone()).unwrap();
    let images = [1u32, 0, 1, 0];
    let f = morphism_check(MapTerm::Table(images.to_vec()), x4, x2).unwrap();
    let pushed = pushforward_mor(&cat, &f, &phi);

    // Over y the summands are the preimages in increasing label order.
    let offsets = |ranks: &[usize], y: u32| -> (Vec<Option<usize>>, usize) {
        let mut at = 0;
        let offs = (0..4)
            .map(|i| {
                (images[i] == y).then(|| {
                    at += ranks[i];
                    at - ranks[i]
                })
            })
            .collect();
        (offs, at)
    };
    for y1 in 0..2 {
        for y0 in 0..2 {
            let (row_off, rows) = offsets(&dst_ranks, y1);
            let (col_off, cols) = offsets(&src_ranks, y0);
            let mut expected = Matrix::zero(&ring, rows, cols);
            for ((to, from), e) in &entries {
                let (Point::Label(i), Point::Label(j)) = (to, from) else { unreachable!() };
                let (i, j) = (*i as usize, *j as usize);
                if let (Some(r0), Some(c0)) = (row_off[i], col_off[j]) {
                    for a in 0..e.rows() {
                        for b in 0..e.cols() {
                            expected.set(r0 + a, c0 + b, *e.get(a, b));
                        }
                    }
                }
            }
            assert_eq!(pushed.entry(&cat, &Point::Label(y1), &Point::Label(y0)), expected, "block ({y1}, {y0})");
        }
    }
}
