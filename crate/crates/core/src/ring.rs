//! Exact coefficient rings: the integers, integers modulo `n`, and the rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde_json::{json, Value};

use crate::matrix::Matrix;

pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Two-sided inverse of a square matrix, if one exists over this ring.
    fn invert(&self, m: &Matrix<Self::Elem>) -> Option<Matrix<Self::Elem>>;

    /// A small random element, used by the generators.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        self.from_i64(rng.random_range(-2..=2))
    }

    fn to_json(&self, a: &Self::Elem) -> Value;
    fn parse(&self, v: &Value) -> Option<Self::Elem>;
    fn spec_json(&self) -> Value;
    fn ring_spec(&self) -> RingSpec;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Integers;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMod {
    n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl IntMod {
    pub fn new(n: u64) -> Option<Self> {
        (n >= 2 && n <= u32::MAX as u64).then_some(IntMod { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    fn is_prime(&self) -> bool {
        let n = self.n;
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn inv_scalar(&self, a: u64) -> Option<u64> {
        let g = num_integer::Integer::extended_gcd(&(a as i64), &(self.n as i64));
        (g.gcd == 1).then(|| g.x.rem_euclid(self.n as i64) as u64)
    }
}

fn to_rational(m: &Matrix<BigInt>) -> Matrix<BigRational> {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// Gauss-Jordan inversion over the rationals.
fn invert_q(m: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let w = 2 * n;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| m.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..w {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    let data = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Some(Matrix::from_vec(n, n, data))
}

fn det_q(m: &Matrix<BigRational>) -> BigRational {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    det
}

impl Ring for Integers {
    type Elem = BigInt;

    fn name(&self) -> String {
        "Z".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn invert(&self, m: &Matrix<BigInt>) -> Option<Matrix<BigInt>> {
        let inv = invert_q(&to_rational(m))?;
        if inv.data().iter().all(|x| x.is_integer()) {
            Some(inv.map(|x| x.to_integer()))
        } else {
            None
        }
    }
    fn to_json(&self, a: &BigInt) -> Value {
        match a.to_i64() {
            Some(n) => json!(n),
            None => json!(a.to_string()),
        }
    }
    fn parse(&self, v: &Value) -> Option<BigInt> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
    fn spec_json(&self) -> Value {
        json!({"kind": "int"})
    }
    fn ring_spec(&self) -> RingSpec {
        RingSpec::Integers
    }
}

impl Ring for IntMod {
    type Elem = u64;

    fn name(&self) -> String {
        format!("Z/{}", self.n)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.n as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.n - a) % self.n
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.n
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn invert(&self, m: &Matrix<u64>) -> Option<Matrix<u64>> {
        let n = m.rows();
        if n != m.cols() {
            return None;
        }
        if self.is_prime() {
            return self.invert_field(m);
        }
        // A·adj(A) = det(A)·I over Z, so det⁻¹·adj(A) is the inverse mod n
        // whenever det(A) is a unit.
        let lifted = m.map(|&x| BigRational::from_integer(BigInt::from(x)));
        let det = det_q(&lifted).to_integer();
        let det_mod = det.mod_floor(&BigInt::from(self.n)).to_u64().unwrap();
        let det_inv = self.inv_scalar(det_mod)?;
        let inv_q = invert_q(&lifted)?;
        let modulus = BigInt::from(self.n);
        Some(inv_q.map(|x| {
            let adj = (x * BigRational::from_integer(det.clone())).to_integer();
            let r = adj.mod_floor(&modulus).to_u64().unwrap();
            self.mul(&r, &det_inv)
        }))
    }
    fn to_json(&self, a: &u64) -> Value {
        json!(a)
    }
    fn parse(&self, v: &Value) -> Option<u64> {
        v.as_i64().map(|n| self.from_i64(n))
    }
    fn spec_json(&self) -> Value {
        json!({"kind": "mod", "n": self.n})
    }
    fn ring_spec(&self) -> RingSpec {
        RingSpec::Mod(self.n)
    }
}

impl IntMod {
    fn invert_field(&self, m: &Matrix<u64>) -> Option<Matrix<u64>> {
        let n = m.rows();
        let w = 2 * n;
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row: Vec<u64> = (0..n).map(|j| *m.get(i, j)).collect();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            let p = self.inv_scalar(a[col][col])?;
            for x in a[col].iter_mut() {
                *x = self.mul(x, &p);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..w {
                        let sub = self.mul(&f, &a[col][c]);
                        a[r][c] = self.sub(&a[r][c], &sub);
                    }
                }
            }
        }
        let data = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Some(Matrix::from_vec(n, n, data))
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn invert(&self, m: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
        invert_q(m)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num: i64 = rng.random_range(-2..=2);
        let den: i64 = rng.random_range(1..=2);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(n) = a.to_integer().to_i64() {
                return json!(n);
            }
        }
        json!(format!("{}/{}", a.numer(), a.denom()))
    }
    fn parse(&self, v: &Value) -> Option<BigRational> {
        match v {
            Value::Number(n) => n.as_i64().map(|n| self.from_i64(n)),
            Value::String(s) => match s.split_once('/') {
                Some((p, q)) => {
                    let q: BigInt = q.trim().parse().ok()?;
                    if q.is_zero() {
                        return None;
                    }
                    Some(BigRational::new(p.trim().parse().ok()?, q))
                }
                None => s.trim().parse().ok().map(BigRational::from_integer),
            },
            _ => None,
        }
    }
    fn spec_json(&self) -> Value {
        json!({"kind": "rat"})
    }
    fn ring_spec(&self) -> RingSpec {
        RingSpec::Rationals
    }
}

/// A ring chosen at run time, e.g. from a scenario file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Mod(u64),
    Rationals,
}

impl RingSpec {
    pub fn parse(v: &Value) -> Option<Self> {
        match v.get("kind")?.as_str()? {
            "int" => Some(RingSpec::Integers),
            "rat" => Some(RingSpec::Rationals),
            "mod" => {
                let n = v.get("n")?.as_u64()?;
                IntMod::new(n).map(|_| RingSpec::Mod(n))
            }
            _ => None,
        }
    }

    /// Short form used on the command line: `Z`, `Q`, `Z/6`.
    pub fn parse_short(s: &str) -> Option<Self> {
        match s {
            "Z" | "int" => Some(RingSpec::Integers),
            "Q" | "rat" => Some(RingSpec::Rationals),
            _ => {
                let n: u64 = s.strip_prefix("Z/")?.parse().ok()?;
                IntMod::new(n).map(|_| RingSpec::Mod(n))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RingSpec::Integers => Integers.spec_json(),
            RingSpec::Mod(n) => json!({"kind": "mod", "n": n}),
            RingSpec::Rationals => Rationals.spec_json(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            RingSpec::Integers => "Z".into(),
            RingSpec::Mod(n) => format!("Z/{n}"),
            RingSpec::Rationals => "Q".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse_prime_and_composite() {
        let z5 = IntMod::new(5).unwrap();
        let m = Matrix::from_vec(2, 2, vec![2, 1, 1, 1]);
        let inv = z5.invert(&m).unwrap();
        assert_eq!(m.mul(&z5, &inv), Matrix::identity(&z5, 2));

        let z6 = IntMod::new(6).unwrap();
        let m = Matrix::from_vec(2, 2, vec![1, 2, 3, 1]); // det = -5 ≡ 1
        let inv = z6.invert(&m).unwrap();
        assert_eq!(m.mul(&z6, &inv), Matrix::identity(&z6, 2));
        assert_eq!(inv.mul(&z6, &m), Matrix::identity(&z6, 2));
        // det = 2 is not a unit mod 6
        assert!(z6.invert(&Matrix::from_vec(1, 1, vec![2])).is_none());
    }

    #[test]
    fn integer_inverse_needs_unit_determinant() {
        let z = Integers;
        assert!(z.invert(&Matrix::from_vec(1, 1, vec![BigInt::from(2)])).is_none());
        let m = Matrix::from_vec(2, 2, [2, 1, 1, 1].map(BigInt::from).to_vec());
        let inv = z.invert(&m).unwrap();
        assert_eq!(m.mul(&z, &inv), Matrix::identity(&z, 2));
    }

    #[test]
    fn rational_parse_round_trip() {
        let q = Rationals;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(q.parse(&q.to_json(&half)), Some(half));
        assert_eq!(q.parse(&json!("3/0")), None);
        assert_eq!(RingSpec::parse_short("Z/6"), Some(RingSpec::Mod(6)));
        assert_eq!(RingSpec::parse_short("Z/1"), None);
    }
}
