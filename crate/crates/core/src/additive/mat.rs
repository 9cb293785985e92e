use rand::{Rng, RngCore};
use serde_json::Value;

use super::{AdditiveCategory, InstanceSpec};
use crate::group::{FiniteGroup, GroupElem};
use crate::matrix::Matrix;
use crate::ring::Ring;

/// Free modules of finite rank over a ring. Objects are ranks, morphisms are
/// matrices, `⊗` is the Kronecker product and every group acts trivially.
#[derive(Clone, Debug)]
pub struct MatCat<R: Ring> {
    ring: R,
    fake_sigma: bool,
}

impl<R: Ring> MatCat<R> {
    pub fn new(ring: R) -> Self {
        MatCat { ring, fake_sigma: false }
    }

    /// The same category with `σ_{n,m}` replaced by the identity matrix.
    /// Still an involution and still satisfies the hexagons, but it is not
    /// natural.
    pub fn fake_sigma(ring: R) -> Self {
        MatCat { ring, fake_sigma: true }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

/// Lower times upper unitriangular, so determinant one over any ring.
pub(crate) fn random_unimodular<R: Ring>(ring: &R, rng: &mut dyn RngCore, n: usize) -> Matrix<R::Elem> {
    let mut lower = Matrix::identity(ring, n);
    let mut upper = Matrix::identity(ring, n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, ring.sample(rng));
            upper.set(j, i, ring.sample(rng));
        }
    }
    let mut m = lower.mul(ring, &upper);
    // Occasionally flip a sign so automorphisms are not all unipotent.
    if n > 0 && rng.random_bool(0.5) {
        let k = rng.random_range(0..n);
        for j in 0..n {
            let v = ring.neg(m.get(k, j));
            m.set(k, j, v);
        }
    }
    m
}

pub(crate) fn random_matrix<R: Ring>(ring: &R, rng: &mut dyn RngCore, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.sample(rng))
}

pub(crate) fn sign_matrix<R: Ring>(ring: &R, n: usize, negate: &dyn Fn(usize) -> bool) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| match (i == j, negate(i)) {
        (false, _) => ring.zero(),
        (true, false) => ring.one(),
        (true, true) => ring.neg(&ring.one()),
    })
}

pub(crate) fn injection_matrix<R: Ring>(ring: &R, ranks: &[usize], j: usize) -> Matrix<R::Elem> {
    let total: usize = ranks.iter().sum();
    let offset: usize = ranks[..j].iter().sum();
    let mut m = Matrix::zero(ring, total, ranks[j]);
    for k in 0..ranks[j] {
        m.set(offset + k, k, ring.one());
    }
    m
}

impl<R: Ring> AdditiveCategory for MatCat<R> {
    type Obj = usize;
    type Mor = Matrix<R::Elem>;

    fn name(&self) -> String {
        self.spec().name()
    }

    fn spec(&self) -> InstanceSpec {
        if self.fake_sigma {
            InstanceSpec::FakeSigma(self.ring.ring_spec())
        } else {
            InstanceSpec::Mat(self.ring.ring_spec())
        }
    }

    fn source(&self, f: &Self::Mor) -> usize {
        f.cols()
    }

    fn target(&self, f: &Self::Mor) -> usize {
        f.rows()
    }

    fn zero_obj(&self) -> usize {
        0
    }

    fn is_zero_obj(&self, a: &usize) -> bool {
        *a == 0
    }

    fn zero(&self, from: &usize, to: &usize) -> Self::Mor {
        Matrix::zero(&self.ring, *to, *from)
    }

    fn identity(&self, a: &usize) -> Self::Mor {
        Matrix::identity(&self.ring, *a)
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        g.mul(&self.ring, f)
    }

    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        f.add(&self.ring, g)
    }

    fn neg(&self, f: &Self::Mor) -> Self::Mor {
        f.neg(&self.ring)
    }

    fn is_zero(&self, f: &Self::Mor) -> bool {
        f.is_zero(&self.ring)
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        if f.rows() != f.cols() {
            return None;
        }
        self.ring.invert(f)
    }

    fn sum_obj(&self, objs: &[usize]) -> usize {
        objs.iter().sum()
    }

    fn injection(&self, objs: &[usize], j: usize) -> Self::Mor {
        injection_matrix(&self.ring, objs, j)
    }

    fn projection(&self, objs: &[usize], j: usize) -> Self::Mor {
        let inj = injection_matrix(&self.ring, objs, j);
        Matrix::from_fn(inj.cols(), inj.rows(), |i, k| inj.get(k, i).clone())
    }

    fn matrix_from_blocks(
        &self,
        targets: &[usize],
        sources: &[usize],
        block: &mut dyn FnMut(usize, usize) -> Option<Self::Mor>,
    ) -> Self::Mor {
        let mut m = Matrix::zero(&self.ring, targets.iter().sum(), sources.iter().sum());
        let mut row = 0;
        for (i, &r) in targets.iter().enumerate() {
            let mut col = 0;
            for (j, &c) in sources.iter().enumerate() {
                if let Some(b) = block(i, j) {
                    assert_eq!((b.rows(), b.cols()), (r, c), "block shape");
                    m.set_block(row, col, &b);
                }
                col += c;
            }
            row += r;
        }
        m
    }

    fn block(&self, targets: &[usize], sources: &[usize], m: &Self::Mor, i: usize, j: usize) -> Self::Mor {
        let row: usize = targets[..i].iter().sum();
        let col: usize = sources[..j].iter().sum();
        m.block(row, col, targets[i], sources[j])
    }

    fn unit(&self) -> usize {
        1
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }

    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        f.kron(&self.ring, g)
    }

    fn alpha(&self, a: &usize, b: &usize, c: &usize) -> Self::Mor {
        self.identity(&(a * b * c))
    }

    fn eta(&self, a: &usize) -> Self::Mor {
        self.identity(a)
    }

    fn sigma(&self, a: &usize, b: &usize) -> Self::Mor {
        if self.fake_sigma {
            self.identity(&(a * b))
        } else {
            Matrix::commutation(&self.ring, *a, *b)
        }
    }

    fn acts_with(&self, _group: &FiniteGroup) -> bool {
        true
    }

    fn act_obj(&self, _g: GroupElem, a: &usize) -> usize {
        *a
    }

    fn act_mor(&self, _g: GroupElem, f: &Self::Mor) -> Self::Mor {
        f.clone()
    }

    fn epsilon(&self, _g: GroupElem) -> Self::Mor {
        self.identity(&1)
    }

    fn mu(&self, _g: GroupElem, a: &usize, b: &usize) -> Self::Mor {
        self.identity(&(a * b))
    }

    fn obj_to_json(&self, a: &usize) -> Value {
        Value::from(*a)
    }

    fn obj_from_json(&self, v: &Value) -> Option<usize> {
        v.as_u64().map(|n| n as usize)
    }

    fn mor_to_json(&self, f: &Self::Mor) -> Value {
        f.to_json(&self.ring)
    }

    fn mor_from_json(&self, v: &Value) -> Option<Self::Mor> {
        Matrix::parse(&self.ring, v)
    }

    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize, _stabilizer: &[GroupElem]) -> usize {
        rng.random_range(1..=max_rank.max(1))
    }

    fn random_mor(&self, rng: &mut dyn RngCore, from: &usize, to: &usize) -> Self::Mor {
        random_matrix(&self.ring, rng, *to, *from)
    }

    fn random_auto(&self, rng: &mut dyn RngCore, a: &usize) -> Self::Mor {
        random_unimodular(&self.ring, rng, *a)
    }

    fn sign_diag(&self, a: &usize, negate: &dyn Fn(usize) -> bool) -> Self::Mor {
        sign_matrix(&self.ring, *a, negate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntMod, Integers};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn blocks_round_trip() {
        let cat = MatCat::new(IntMod::new(7).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let targets = [2, 1];
        let sources = [1, 3];
        let blocks: Vec<Vec<_>> = targets
            .iter()
            .map(|t| sources.iter().map(|s| cat.random_mor(&mut rng, s, t)).collect())
            .collect();
        let m = cat.matrix_from_blocks(&targets, &sources, &mut |i, j| Some(blocks[i][j].clone()));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(cat.block(&targets, &sources, &m, i, j), blocks[i][j]);
            }
        }
    }

    #[test]
    fn unimodular_is_invertible_over_z() {
        let cat = MatCat::new(Integers);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 0..5 {
            let a = cat.random_auto(&mut rng, &n);
            let inv = cat.inverse(&a).expect("unimodular");
            assert!(cat.compose(&a, &inv).is_identity(&Integers));
        }
    }

    #[test]
    fn fake_sigma_is_an_involution() {
        let cat = MatCat::fake_sigma(Integers);
        let s = cat.sigma(&2, &3);
        assert!(cat.compose(&cat.sigma(&3, &2), &s).is_identity(&Integers));
    }
}
