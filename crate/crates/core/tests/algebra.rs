use bornctl::additive::{AdditiveCategory, MatCat};
use bornctl::group::FiniteGroup;
use bornctl::matrix::Matrix;
use bornctl::ring::{IntMod, Integers, Ring};

fn perm(label: &str) -> Vec<usize> {
    label.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
}

#[test]
fn s3_multiplication_is_permutation_composition() {
    let g = FiniteGroup::symmetric3();
    assert_eq!(g.order(), 6);
    for a in g.elements() {
        for b in g.elements() {
            let (pa, pb) = (perm(g.label(a)), perm(g.label(b)));
            let ab: Vec<usize> = (0..3).map(|i| pa[pb[i]]).collect();
            assert_eq!(perm(g.label(g.mul(a, b))), ab);
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
        }
    }
    let mut orders = [0; 7];
    for a in g.elements() {
        let mut k = 1;
        let mut x = a;
        while x != g.unit() {
            x = g.mul(x, a);
            k += 1;
        }
        orders[k] += 1;
    }
    assert_eq!((orders[1], orders[2], orders[3]), (1, 3, 2));
}

#[test]
fn kronecker_over_z5_follows_the_index_formula() {
    let ring = IntMod::new(5).unwrap();
    let a = Matrix::from_vec(2, 2, vec![1, 2, 3, 4]);
    let b = Matrix::from_vec(3, 3, vec![0, 1, 2, 3, 4, 0, 1, 2, 3]);
    let k = a.kron(&ring, &b);
    assert_eq!((k.rows(), k.cols()), (6, 6));
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..3 {
                for q in 0..3 {
                    assert_eq!(*k.get(3 * i + p, 3 * j + q), (a.get(i, j) * b.get(p, q)) % 5);
                }
            }
        }
    }
}

#[test]
fn symmetry_in_matcat_moves_basis_vectors() {
    let cat = MatCat::new(Integers);
    let ring = Integers;
    for (n, m) in [(1, 3), (2, 3), (3, 2), (2, 2)] {
        let s = cat.sigma(&n, &m);
        for i in 0..n {
            for k in 0..m {
                let col = i * m + k;
                let hit: Vec<usize> = (0..n * m).filter(|&r| !ring.is_zero(s.get(r, col))).collect();
                assert_eq!(hit, vec![k * n + i]);
                assert_eq!(*s.get(k * n + i, col), ring.one());
            }
        }
        assert!(s.mul(&ring, &cat.sigma(&m, &n)).is_identity(&ring));
    }
}

#[test]
fn fake_symmetry_differs_from_the_real_one() {
    let real = MatCat::new(Integers);
    let fake = MatCat::fake_sigma(Integers);
    assert_eq!(real.sigma(&1, &4), fake.sigma(&1, &4));
    assert_ne!(real.sigma(&2, &2), fake.sigma(&2, &2));
}
