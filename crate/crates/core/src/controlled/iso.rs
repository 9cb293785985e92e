use std::collections::BTreeMap;

use super::morphism::{mor_check, ControlledMorphism};
use crate::additive::AdditiveCategory;
use crate::set::Point;

enum Node {
    Src(usize),
    Dst(usize),
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Decides invertibility in the category of controlled objects. The
/// support graph of `φ` splits into connected blocks; `φ` is invertible iff
/// every block is, and the candidate inverse must itself be a controlled
/// equivariant morphism.
pub fn mor_is_iso<A: AdditiveCategory>(cat: &A, phi: &ControlledMorphism<A>) -> Option<ControlledMorphism<A>> {
    let srcs: Vec<&Point> = phi.src().support().collect();
    let dsts: Vec<&Point> = phi.dst().support().collect();
    let s_idx: BTreeMap<&Point, usize> = srcs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let d_idx: BTreeMap<&Point, usize> = dsts.iter().enumerate().map(|(i, p)| (*p, srcs.len() + i)).collect();
    let mut parent: Vec<usize> = (0..srcs.len() + dsts.len()).collect();
    for (to, from) in phi.entries().keys() {
        let (a, b) = (find(&mut parent, s_idx[from]), find(&mut parent, d_idx[to]));
        parent[a] = b;
    }
    let mut blocks: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    for i in 0..parent.len() {
        let root = find(&mut parent, i);
        let node = if i < srcs.len() { Node::Src(i) } else { Node::Dst(i - srcs.len()) };
        blocks.entry(root).or_default().push(node);
    }
    let mut inverse = BTreeMap::new();
    for nodes in blocks.values() {
        let cols: Vec<&Point> = nodes.iter().filter_map(|n| if let Node::Src(i) = n { Some(srcs[*i]) } else { None }).collect();
        let rows: Vec<&Point> = nodes.iter().filter_map(|n| if let Node::Dst(i) = n { Some(dsts[*i]) } else { None }).collect();
        let col_objs: Vec<A::Obj> = cols.iter().map(|x| phi.src().fiber(x).unwrap().clone()).collect();
        let row_objs: Vec<A::Obj> = rows.iter().map(|x| phi.dst().fiber(x).unwrap().clone()).collect();
        let m = cat.matrix_from_blocks(&row_objs, &col_objs, &mut |i, j| phi.entries().get(&(rows[i].clone(), cols[j].clone())).cloned());
        let inv = cat.inverse(&m)?;
        for (i, x) in cols.iter().enumerate() {
            for (j, y) in rows.iter().enumerate() {
                let b = cat.block(&col_objs, &row_objs, &inv, i, j);
                if !cat.is_zero(&b) {
                    inverse.insert(((*x).clone(), (*y).clone()), b);
                }
            }
        }
    }
    mor_check(cat, phi.dst().clone(), phi.src().clone(), inverse).ok()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::additive::MatCat;
    use crate::coarse::{BornCoarseSpace, Bornology, CoarseStructure};
    use crate::controlled::{mor_compose, mor_identity, obj_check, ControlledObject};
    use crate::group::{FiniteGroup, GAction};
    use crate::matrix::Matrix;
    use crate::ring::{IntMod, Integers};
    use crate::set::AmbientSet;

    fn whole(n: usize) -> Arc<BornCoarseSpace> {
        let action = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::numbered(n));
        Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap())
    }

    fn rank_one_points<R: crate::ring::Ring>(cat: &MatCat<R>, space: Arc<BornCoarseSpace>, n: u32) -> Arc<ControlledObject<MatCat<R>>> {
        let fibers = (0..n).map(|i| (Point::Label(i), 1)).collect();
        let rho = vec![(0..n).map(|i| (Point::Label(i), Matrix::identity(cat.ring(), 1))).collect()];
        Arc::new(obj_check(cat, space, fibers, rho).unwrap())
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let cat = MatCat::new(Integers);
        let m = rank_one_points(&cat, whole(2), 2);
        let id = mor_identity(&cat, &m);
        assert_eq!(mor_is_iso(&cat, &id), Some(id));
    }

    #[test]
    fn two_is_not_a_unit_over_z() {
        let cat = MatCat::new(Integers);
        let m = rank_one_points(&cat, whole(1), 1);
        let two = Matrix::from_vec(1, 1, vec![2.into()]);
        let phi = mor_check(&cat, m.clone(), m, BTreeMap::from([((Point::Label(0), Point::Label(0)), two)])).unwrap();
        assert!(mor_is_iso(&cat, &phi).is_none());
    }

    #[test]
    fn spread_matrix_over_z5_inverts() {
        let ring = IntMod::new(5).unwrap();
        let cat = MatCat::new(ring);
        let m = rank_one_points(&cat, whole(2), 2);
        let e = |v: u64| Matrix::from_vec(1, 1, vec![v]);
        let (a, b) = (Point::Label(0), Point::Label(1));
        // [[1,2],[3,4]] has determinant -2 = 3 mod 5.
        let entries = BTreeMap::from([
            ((a.clone(), a.clone()), e(1)),
            ((a.clone(), b.clone()), e(2)),
            ((b.clone(), a.clone()), e(3)),
            ((b.clone(), b.clone()), e(4)),
        ]);
        let phi = mor_check(&cat, m.clone(), m.clone(), entries).unwrap();
        let inv = mor_is_iso(&cat, &phi).expect("invertible mod 5");
        assert_eq!(mor_compose(&cat, &inv, &phi).unwrap(), mor_identity(&cat, &m));
        assert_eq!(mor_compose(&cat, &phi, &inv).unwrap(), mor_identity(&cat, &m));
    }
}
