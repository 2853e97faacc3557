use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::matrix::{IntMatrix, RatMatrix};

/// Univariate polynomial over Z, coefficients lowest degree first.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn x() -> Self {
        IntPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention of callers
    /// that have excluded it.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn neg(&self) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, rhs: &IntPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &IntPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Horner evaluation at an integer matrix, exact.
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        let n = a.dim();
        let mut acc = IntMatrix::zero(n);
        for c in self.coeffs.iter().rev() {
            let mut next = acc.mul(a);
            for i in 0..n {
                next[(i, i)] += c;
            }
            acc = next;
        }
        acc
    }

    pub fn eval_rat_matrix(&self, a: &RatMatrix) -> RatMatrix {
        let n = a.dim();
        let mut acc = RatMatrix::zero(n);
        for c in self.coeffs.iter().rev() {
            let mut next = acc.mul(a);
            let cr = BigRational::from_integer(c.clone());
            for i in 0..n {
                next[(i, i)] += &cr;
            }
            acc = next;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Division by a monic divisor: (quotient, remainder), exact over Z.
    pub fn divmod_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.is_monic());
        let dd = d.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quo = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone();
            if q.is_zero() {
                continue;
            }
            quo[i - dd] = q.clone();
            for (k, c) in d.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[i - dd + k] -= t;
            }
        }
        (IntPoly::new(quo), IntPoly::new(rem))
    }

    /// True iff d divides self exactly over Z (d monic).
    pub fn divisible_by_monic(&self, d: &IntPoly) -> bool {
        self.divmod_monic(d).1.is_zero()
    }

    /// Resultant of self and rhs via rational Euclidean algorithm.
    pub fn resultant(&self, rhs: &IntPoly) -> BigRational {
        fn to_rat(p: &IntPoly) -> Vec<BigRational> {
            p.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        }
        fn deg(p: &[BigRational]) -> Option<usize> {
            p.iter().rposition(|c| !c.is_zero())
        }
        let mut a = to_rat(self);
        let mut b = to_rat(rhs);
        let mut res = BigRational::one();
        loop {
            let db = match deg(&b) {
                Some(d) => d,
                None => return BigRational::zero(),
            };
            let da = match deg(&a) {
                Some(d) => d,
                None => return BigRational::zero(),
            };
            if db == 0 {
                let mut p = BigRational::one();
                for _ in 0..da {
                    p *= &b[0];
                }
                return res * p;
            }
            // a = q*b + r; res(a,b) = lc(b)^(da-dr) * (-1)^(da*db) * res(b,r)
            let lcb = b[db].clone();
            let mut r = a.clone();
            for i in (db..=da).rev() {
                let q = &r[i] / &lcb;
                if q.is_zero() {
                    continue;
                }
                for k in 0..=db {
                    let t = &q * &b[k];
                    r[i - db + k] -= t;
                }
            }
            let dr = deg(&r).map(|d| d as i64).unwrap_or(-1);
            if dr < 0 {
                return BigRational::zero();
            }
            let mut p = BigRational::one();
            for _ in 0..(da as i64 - dr) {
                p *= &lcb;
            }
            if (da * db) % 2 == 1 {
                p = -p;
            }
            res *= p;
            a = b;
            b = r;
            b.truncate(dr as usize + 1);
        }
    }

    /// Discriminant of a monic polynomial: (-1)^(n(n-1)/2) res(h, h').
    pub fn discriminant(&self) -> BigInt {
        assert!(self.is_monic());
        let n = self.degree();
        let r = self.resultant(&self.derivative());
        let mut d = r;
        if (n * (n - 1) / 2) % 2 == 1 {
            d = -d;
        }
        assert!(d.is_integer());
        d.to_integer()
    }

    /// Reduce coefficients mod m into [0, m).
    pub fn reduce_mod(&self, m: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }
}

/// Polynomial over F_p (p prime), coefficients in [0, p), lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub p: BigInt,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly(mod {}, {:?})", self.p, self.coeffs)
    }
}

pub fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return None;
    }
    let eg = a.extended_gcd(p);
    if !eg.gcd.is_one() {
        return None;
    }
    Some(eg.x.mod_floor(p))
}

impl ModPoly {
    pub fn new(p: &BigInt, coeffs: Vec<BigInt>) -> Self {
        let mut c: Vec<BigInt> = coeffs.into_iter().map(|x| x.mod_floor(p)).collect();
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        ModPoly {
            p: p.clone(),
            coeffs: c,
        }
    }

    pub fn from_int_poly(f: &IntPoly, p: &BigInt) -> Self {
        Self::new(p, f.coeffs().to_vec())
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn zero(p: &BigInt) -> Self {
        ModPoly {
            p: p.clone(),
            coeffs: vec![],
        }
    }

    pub fn one(p: &BigInt) -> Self {
        Self::new(p, vec![BigInt::one()])
    }

    pub fn x(p: &BigInt) -> Self {
        Self::new(p, vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, rhs: &ModPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(&self.p, (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &ModPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(&self.p, (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &ModPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.p);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
                out[i + j] = out[i + j].mod_floor(&self.p);
            }
        }
        Self::new(&self.p, out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(&self.p, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inverse(&self.leading(), &self.p).expect("prime modulus");
        self.scale(&inv)
    }

    pub fn divmod(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero());
        let dd = d.degree();
        let lc_inv = mod_inverse(&d.leading(), &self.p).expect("prime modulus");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd && !(dd == 0) {
            return (Self::zero(&self.p), self.clone());
        }
        if dd == 0 {
            let q = self.scale(&lc_inv);
            return (q, Self::zero(&self.p));
        }
        let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
        for i in (dd..rem.len()).rev() {
            let q = (&rem[i] * &lc_inv).mod_floor(&self.p);
            if q.is_zero() {
                continue;
            }
            quo[i - dd] = q.clone();
            for (k, c) in d.coeffs.iter().enumerate() {
                rem[i - dd + k] = (&rem[i - dd + k] - &q * c).mod_floor(&self.p);
            }
        }
        (Self::new(&self.p, quo), Self::new(&self.p, rem))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.divmod(d).1
    }

    pub fn gcd(&self, rhs: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// self^e mod m, e >= 0.
    pub fn pow_mod(&self, e: &BigInt, m: &ModPoly) -> ModPoly {
        let mut result = Self::one(&self.p);
        let mut base = self.rem(m);
        let mut e = e.clone();
        let two = BigInt::from(2);
        while e.is_positive() {
            if (&e % &two).is_one() {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        result
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.p);
        }
        Self::new(
            &self.p,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(&self.p);
        }
        acc
    }
}
