use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use super::mat::{injection_matrix, random_matrix, random_unimodular, sign_matrix};
use super::{AdditiveCategory, InstanceSpec};
use crate::group::{FiniteGroup, GroupElem};
use crate::matrix::Matrix;
use crate::ring::Ring;

/// `G`-graded free modules: an object is a rank for every group element,
/// morphisms are componentwise matrices, and `g` shifts the grading so that
/// `(g·A)(k) = A(g⁻¹k)`. The tensor product is taken pointwise, which makes
/// the action strict monoidal with identity structure maps.
#[derive(Clone, Debug)]
pub struct ShiftCat<R: Ring> {
    group: Arc<FiniteGroup>,
    group_name: String,
    ring: R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMor<E> {
    pub components: Vec<Matrix<E>>,
}

impl<R: Ring> ShiftCat<R> {
    pub fn new(group: Arc<FiniteGroup>, group_name: String, ring: R) -> Self {
        ShiftCat { group, group_name, ring }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn each(&self, f: impl FnMut(usize) -> Matrix<R::Elem>) -> ShiftMor<R::Elem> {
        ShiftMor {
            components: (0..self.group.order()).map(f).collect(),
        }
    }

    fn zip(
        &self,
        a: &ShiftMor<R::Elem>,
        b: &ShiftMor<R::Elem>,
        f: impl Fn(&Matrix<R::Elem>, &Matrix<R::Elem>) -> Matrix<R::Elem>,
    ) -> ShiftMor<R::Elem> {
        self.each(|k| f(&a.components[k], &b.components[k]))
    }

    /// The index `g⁻¹k`.
    fn shifted(&self, g: GroupElem, k: usize) -> usize {
        self.group.mul(self.group.inv(g), GroupElem(k as u32)).index()
    }

    fn component_objs(objs: &[Vec<usize>], k: usize) -> Vec<usize> {
        objs.iter().map(|a| a[k]).collect()
    }
}

impl<R: Ring> AdditiveCategory for ShiftCat<R> {
    type Obj = Vec<usize>;
    type Mor = ShiftMor<R::Elem>;

    fn name(&self) -> String {
        self.spec().name()
    }

    fn spec(&self) -> InstanceSpec {
        InstanceSpec::Shift {
            group: self.group.clone(),
            group_name: self.group_name.clone(),
            ring: self.ring.ring_spec(),
        }
    }

    fn source(&self, f: &Self::Mor) -> Vec<usize> {
        f.components.iter().map(Matrix::cols).collect()
    }

    fn target(&self, f: &Self::Mor) -> Vec<usize> {
        f.components.iter().map(Matrix::rows).collect()
    }

    fn zero_obj(&self) -> Vec<usize> {
        vec![0; self.group.order()]
    }

    fn is_zero_obj(&self, a: &Vec<usize>) -> bool {
        a.iter().all(|&r| r == 0)
    }

    fn zero(&self, from: &Vec<usize>, to: &Vec<usize>) -> Self::Mor {
        self.each(|k| Matrix::zero(&self.ring, to[k], from[k]))
    }

    fn identity(&self, a: &Vec<usize>) -> Self::Mor {
        self.each(|k| Matrix::identity(&self.ring, a[k]))
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        self.zip(g, f, |x, y| x.mul(&self.ring, y))
    }

    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        self.zip(f, g, |x, y| x.add(&self.ring, y))
    }

    fn neg(&self, f: &Self::Mor) -> Self::Mor {
        self.each(|k| f.components[k].neg(&self.ring))
    }

    fn is_zero(&self, f: &Self::Mor) -> bool {
        f.components.iter().all(|m| m.is_zero(&self.ring))
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let components = f
            .components
            .iter()
            .map(|m| if m.rows() == m.cols() { self.ring.invert(m) } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(ShiftMor { components })
    }

    fn sum_obj(&self, objs: &[Vec<usize>]) -> Vec<usize> {
        (0..self.group.order()).map(|k| objs.iter().map(|a| a[k]).sum()).collect()
    }

    fn injection(&self, objs: &[Vec<usize>], j: usize) -> Self::Mor {
        self.each(|k| injection_matrix(&self.ring, &Self::component_objs(objs, k), j))
    }

    fn projection(&self, objs: &[Vec<usize>], j: usize) -> Self::Mor {
        self.each(|k| {
            let inj = injection_matrix(&self.ring, &Self::component_objs(objs, k), j);
            Matrix::from_fn(inj.cols(), inj.rows(), |i, l| inj.get(l, i).clone())
        })
    }

    fn block(&self, targets: &[Vec<usize>], sources: &[Vec<usize>], m: &Self::Mor, i: usize, j: usize) -> Self::Mor {
        self.each(|k| {
            let row: usize = targets[..i].iter().map(|a| a[k]).sum();
            let col: usize = sources[..j].iter().map(|a| a[k]).sum();
            m.components[k].block(row, col, targets[i][k], sources[j][k])
        })
    }

    fn unit(&self) -> Vec<usize> {
        vec![1; self.group.order()]
    }

    fn tensor_obj(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        self.zip(f, g, |x, y| x.kron(&self.ring, y))
    }

    fn alpha(&self, a: &Vec<usize>, b: &Vec<usize>, c: &Vec<usize>) -> Self::Mor {
        self.identity(&self.tensor_obj(&self.tensor_obj(a, b), c))
    }

    fn eta(&self, a: &Vec<usize>) -> Self::Mor {
        self.identity(a)
    }

    fn sigma(&self, a: &Vec<usize>, b: &Vec<usize>) -> Self::Mor {
        self.each(|k| Matrix::commutation(&self.ring, a[k], b[k]))
    }

    fn acts_with(&self, group: &FiniteGroup) -> bool {
        *self.group == *group
    }

    fn act_obj(&self, g: GroupElem, a: &Vec<usize>) -> Vec<usize> {
        (0..a.len()).map(|k| a[self.shifted(g, k)]).collect()
    }

    fn act_mor(&self, g: GroupElem, f: &Self::Mor) -> Self::Mor {
        self.each(|k| f.components[self.shifted(g, k)].clone())
    }

    fn epsilon(&self, _g: GroupElem) -> Self::Mor {
        self.identity(&self.unit())
    }

    fn mu(&self, g: GroupElem, a: &Vec<usize>, b: &Vec<usize>) -> Self::Mor {
        self.identity(&self.act_obj(g, &self.tensor_obj(a, b)))
    }

    fn obj_to_json(&self, a: &Vec<usize>) -> Value {
        json!(a)
    }

    fn obj_from_json(&self, v: &Value) -> Option<Vec<usize>> {
        let ranks = v
            .as_array()?
            .iter()
            .map(|r| r.as_u64().map(|n| n as usize))
            .collect::<Option<Vec<_>>>()?;
        (ranks.len() == self.group.order()).then_some(ranks)
    }

    fn mor_to_json(&self, f: &Self::Mor) -> Value {
        json!({"components": f.components.iter().map(|m| m.to_json(&self.ring)).collect::<Vec<_>>()})
    }

    fn mor_from_json(&self, v: &Value) -> Option<Self::Mor> {
        let components = v
            .get("components")?
            .as_array()?
            .iter()
            .map(|m| Matrix::parse(&self.ring, m))
            .collect::<Option<Vec<_>>>()?;
        (components.len() == self.group.order()).then_some(ShiftMor { components })
    }

    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize, stabilizer: &[GroupElem]) -> Vec<usize> {
        // Invariance under H means the ranks are constant on cosets Hk.
        let n = self.group.order();
        let rep: Vec<usize> = (0..n)
            .map(|k| {
                stabilizer
                    .iter()
                    .map(|&h| self.group.mul(h, GroupElem(k as u32)).index())
                    .chain(std::iter::once(k))
                    .min()
                    .unwrap_or(k)
            })
            .collect();
        let mut rank = vec![0; n];
        for k in 0..n {
            if rep[k] == k {
                rank[k] = rng.random_range(0..=max_rank.max(1));
            }
        }
        if rank.iter().all(|&r| r == 0) {
            rank[0] = rng.random_range(1..=max_rank.max(1));
        }
        (0..n).map(|k| rank[rep[k]]).collect()
    }

    fn random_mor(&self, rng: &mut dyn RngCore, from: &Vec<usize>, to: &Vec<usize>) -> Self::Mor {
        self.each(|k| random_matrix(&self.ring, rng, to[k], from[k]))
    }

    fn random_auto(&self, rng: &mut dyn RngCore, a: &Vec<usize>) -> Self::Mor {
        self.each(|k| random_unimodular(&self.ring, rng, a[k]))
    }

    fn sign_diag(&self, a: &Vec<usize>, negate: &dyn Fn(usize) -> bool) -> Self::Mor {
        // Basis vectors are numbered through the components in index order.
        let mut offset = 0;
        self.each(|k| {
            let base = offset;
            offset += a[k];
            sign_matrix(&self.ring, a[k], &|j| negate(base + j))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z3() -> ShiftCat<Integers> {
        ShiftCat::new(Arc::new(FiniteGroup::cyclic(3)), "Z3".into(), Integers)
    }

    #[test]
    fn shift_action_is_strict() {
        let cat = z3();
        let a = vec![1, 2, 3];
        let g = GroupElem(1);
        assert_eq!(cat.act_obj(g, &a), vec![3, 1, 2]);
        let gg = cat.group.mul(g, g);
        assert_eq!(cat.act_obj(g, &cat.act_obj(g, &a)), cat.act_obj(gg, &a));
    }

    #[test]
    fn stabilized_objects_are_fixed() {
        let cat = z3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let all: Vec<GroupElem> = cat.group.elements().collect();
        for _ in 0..20 {
            let a = cat.random_obj(&mut rng, 3, &all);
            assert!(all.iter().all(|&g| cat.act_obj(g, &a) == a));
            assert!(!cat.is_zero_obj(&a));
        }
    }

    #[test]
    fn json_round_trip() {
        let cat = z3();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = cat.random_mor(&mut rng, &vec![1, 0, 2], &vec![2, 1, 1]);
        assert_eq!(cat.mor_from_json(&cat.mor_to_json(&f)), Some(f));
    }
}
