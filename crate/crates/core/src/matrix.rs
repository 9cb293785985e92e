//! Dense row-major matrices over a [`Ring`].
//!
//! A matrix with `rows = m` and `cols = n` is a morphism from rank `n` to
//! rank `m`. Kronecker products index rows and columns row-major on `(i, k)`:
//! entry `(i, k)` of `n ⊗ m` sits at position `i·m + k`.

use serde_json::{json, Value};

use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// The `r × c` block whose top-left corner is at `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, r: usize, c: usize) -> Self {
        Matrix::from_fn(r, c, |i, j| self.get(i0 + i, j0 + j).clone())
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, b: &Matrix<E>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(i0 + i, j0 + j, b.get(i, j).clone());
            }
        }
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zero<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.rows == self.cols && *self == Matrix::identity(ring, self.rows)
    }

    /// `self · other`; panics on a shape mismatch.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Matrix<E> {
        self.map(|a| ring.neg(a))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, s: &E) -> Matrix<E> {
        self.map(|a| ring.mul(s, a))
    }

    /// `(A ⊗ B)[(i,k),(j,l)] = A[i,j]·B[k,l]`.
    pub fn kron<R: Ring<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        let (m, n) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * m, self.cols * n, |r, c| {
            ring.mul(self.get(r / m, c / n), other.get(r % m, c % n))
        })
    }

    /// The commutation matrix `n ⊗ m → m ⊗ n`, sending basis vector `i·m + k`
    /// to `k·n + i`.
    pub fn commutation<R: Ring<Elem = E>>(ring: &R, n: usize, m: usize) -> Matrix<E> {
        let mut out = Matrix::zero(ring, n * m, n * m);
        for i in 0..n {
            for k in 0..m {
                out.set(k * n + i, i * m + k, ring.one());
            }
        }
        out
    }

    pub fn to_json<R: Ring<Elem = E>>(&self, ring: &R) -> Value {
        json!({
            "ring": ring.name(),
            "rows": self.rows,
            "cols": self.cols,
            "data": self.data.iter().map(|x| ring.to_json(x)).collect::<Vec<_>>(),
        })
    }

    pub fn parse<R: Ring<Elem = E>>(ring: &R, v: &Value) -> Option<Matrix<E>> {
        if let Some(tag) = v.get("ring").and_then(Value::as_str) {
            if tag != ring.name() {
                return None;
            }
        }
        let rows = v.get("rows")?.as_u64()? as usize;
        let cols = v.get("cols")?.as_u64()? as usize;
        let data: Option<Vec<E>> = v.get("data")?.as_array()?.iter().map(|x| ring.parse(x)).collect();
        let data = data?;
        (data.len() == rows * cols).then_some(Matrix { rows, cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntMod, Integers};
    use num_bigint::BigInt;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn scalar_kronecker() {
        let a = Matrix::from_vec(1, 1, z(&[2]));
        let b = Matrix::from_vec(1, 1, z(&[3]));
        assert_eq!(a.kron(&Integers, &b), Matrix::from_vec(1, 1, z(&[6])));
    }

    #[test]
    fn kronecker_matches_index_formula_mod5() {
        let r = IntMod::new(5).unwrap();
        let a = Matrix::from_fn(2, 2, |i, j| (3 * i + j + 1) as u64 % 5);
        let b = Matrix::from_fn(3, 3, |i, j| (i * i + 2 * j) as u64 % 5);
        let k = a.kron(&r, &b);
        for i in 0..2 {
            for kk in 0..3 {
                for j in 0..2 {
                    for l in 0..3 {
                        let want = (a.get(i, j) * b.get(kk, l)) % 5;
                        assert_eq!(*k.get(i * 3 + kk, j * 3 + l), want);
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_swaps_kronecker_factors() {
        let r = Integers;
        let a = Matrix::from_vec(2, 2, z(&[1, 2, 3, 4]));
        let b = Matrix::from_vec(3, 3, z(&[0, 1, 0, 2, 0, 1, 1, 1, 5]));
        let s_ab = Matrix::commutation(&r, 2, 3);
        let s_ba = Matrix::commutation(&r, 3, 2);
        assert_eq!(s_ab.mul(&r, &a.kron(&r, &b)), b.kron(&r, &a).mul(&r, &s_ab));
        assert!(s_ba.mul(&r, &s_ab).is_identity(&r));
    }

    #[test]
    fn json_round_trip() {
        let r = IntMod::new(7).unwrap();
        let m = Matrix::from_vec(2, 3, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(Matrix::parse(&r, &m.to_json(&r)), Some(m));
        let empty: Matrix<u64> = Matrix::zero(&r, 0, 3);
        assert_eq!(Matrix::parse(&r, &empty.to_json(&r)), Some(empty));
    }
}
