use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// Square matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.rows_vec())
    }
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix is not square".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(i, j)] = self[(j, i)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s = BigInt::zero();
                for k in 0..self.n {
                    s += &self[(i, k)] * &rhs[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix { n: self.n, entries }
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix { n: self.n, entries }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        IntMatrix { n: self.n, entries }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|k| &self[(i, k)] * &v[k]).sum())
            .collect()
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows_vec();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Characteristic polynomial by the Faddeev-LeVerrier recurrence,
    /// coefficients lowest degree first, monic of degree n.
    pub fn char_poly(&self) -> crate::exact::IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let tr: BigInt = (0..n).map(|i| m[(i, i)].clone()).sum();
            let c = -tr / BigInt::from(k as u64); // exact by construction
            coeffs[n - k] = c.clone();
            for i in 0..n {
                m[(i, i)] += &c;
            }
        }
        crate::exact::IntPoly::new(coeffs)
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect(),
        }
    }

    /// Entrywise reduction modulo m into [0, m).
    pub fn mod_reduce(&self, m: &BigInt) -> IntMatrix {
        let entries = self
            .entries
            .iter()
            .map(|e| e.mod_floor_big(m))
            .collect();
        IntMatrix { n: self.n, entries }
    }
}

trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m.abs()
        } else {
            r
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

/// Square matrix with exact rational entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{:?}", self.entries)
    }
}

impl RatMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self, Error> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(i, j)] = self[(j, i)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s = BigRational::zero();
                for k in 0..self.n {
                    s += &self[(i, k)] * &rhs[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        RatMatrix { n: self.n, entries }
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix { n: self.n, entries }
    }

    pub fn scale(&self, c: &BigRational) -> RatMatrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        RatMatrix { n: self.n, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.to_integer()).collect(),
        })
    }

    pub fn det(&self) -> BigRational {
        // Clear denominators and fall back on the integer Bareiss path.
        let d = self.common_denominator();
        let scaled = self.scale(&BigRational::from_integer(d.clone()));
        let int = scaled.to_int().expect("cleared denominators");
        let mut dn = BigRational::from_integer(int.det());
        let mut dpow = BigRational::one();
        for _ in 0..self.n {
            dpow *= BigRational::from_integer(d.clone());
        }
        dn /= dpow;
        dn
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// Inverse by Gauss-Jordan elimination; None when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                    let tmp = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &p;
                inv[(col, j)] /= &p;
            }
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        let t = &a[(col, j)] * &f;
                        a[(r, j)] -= t;
                        let t = &inv[(col, j)] * &f;
                        inv[(r, j)] -= t;
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|k| &self[(i, k)] * &v[k]).sum())
            .collect()
    }

    pub fn pow_int(&self, k: i64) -> Option<RatMatrix> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = RatMatrix::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_charpoly() {
        let a = IntMatrix::from_rows(&[vec![-1, 3], vec![3, 2]]).unwrap();
        assert_eq!(a.det(), BigInt::from(-11));
        let h = a.char_poly();
        // x^2 - x - 11
        assert_eq!(h.coeffs(), &[BigInt::from(-11), BigInt::from(-1), BigInt::from(1)]);

        let b = IntMatrix::from_rows(&[vec![0, 1], vec![-13, 1]]).unwrap();
        assert_eq!(b.char_poly().coeffs(), &[BigInt::from(13), BigInt::from(-1), BigInt::from(1)]);

        let id = IntMatrix::identity(2);
        assert_eq!(id.char_poly().coeffs(), &[BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn rat_inverse_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]).unwrap().to_rat();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
    }
}
