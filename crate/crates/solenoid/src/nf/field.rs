use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::exact::factor::factor_over_z;
use crate::exact::matrix::RatMatrix;
use crate::exact::poly::IntPoly;

#[derive(Debug)]
struct FieldData {
    h: IntPoly,
    n: usize,
    disc: BigInt,
}

/// K = Q(lambda) presented as Q[x]/(h) for a monic irreducible h.
#[derive(Clone, Debug)]
pub struct NumberField {
    data: Arc<FieldData>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.h == other.data.h
    }
}
impl Eq for NumberField {}

impl NumberField {
    pub fn new(h: IntPoly) -> Result<Self, Error> {
        if !h.is_monic() || h.degree() < 1 {
            return Err(Error::Input("defining polynomial must be monic of degree >= 1".into()));
        }
        let facs = factor_over_z(&h);
        if facs.len() != 1 || facs[0].1 != 1 {
            return Err(Error::Reducible);
        }
        let disc = h.discriminant();
        let n = h.degree();
        Ok(NumberField {
            data: Arc::new(FieldData { h, n, disc }),
        })
    }

    pub fn degree(&self) -> usize {
        self.data.n
    }

    pub fn poly(&self) -> &IntPoly {
        &self.data.h
    }

    pub fn disc(&self) -> &BigInt {
        &self.data.disc
    }

    /// The generator lambda.
    pub fn gen(&self) -> NfElement {
        let mut coords = vec![BigRational::zero(); self.data.n];
        if self.data.n == 1 {
            // lambda is the rational root -h(0)
            coords[0] = BigRational::from_integer(-self.data.h.coeff(0));
        } else {
            coords[1] = BigRational::one();
        }
        NfElement {
            field: self.clone(),
            coords,
        }
    }

    pub fn zero(&self) -> NfElement {
        NfElement {
            field: self.clone(),
            coords: vec![BigRational::zero(); self.data.n],
        }
    }

    pub fn one(&self) -> NfElement {
        self.from_rational(&BigRational::one())
    }

    pub fn from_rational(&self, q: &BigRational) -> NfElement {
        let mut coords = vec![BigRational::zero(); self.data.n];
        coords[0] = q.clone();
        NfElement {
            field: self.clone(),
            coords,
        }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> Result<NfElement, Error> {
        if coords.len() != self.data.n {
            return Err(Error::Input(format!(
                "expected {} coordinates, got {}",
                self.data.n,
                coords.len()
            )));
        }
        Ok(NfElement {
            field: self.clone(),
            coords,
        })
    }

    /// Element q(lambda) for an integer polynomial q (reduced mod h).
    pub fn from_int_poly(&self, q: &IntPoly) -> NfElement {
        let coeffs: Vec<BigRational> = q
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        NfElement {
            field: self.clone(),
            coords: self.reduce(coeffs),
        }
    }

    /// Reduce a rational coefficient vector modulo h into length n.
    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let n = self.data.n;
        let h = &self.data.h;
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - n; // subtract top * x^k * h (minus leading term)
            for i in 0..n {
                let t = &top * BigRational::from_integer(h.coeff(i));
                c[k + i] -= t;
            }
        }
        c.resize(n, BigRational::zero());
        c
    }

    fn mul_coords(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }
}

/// Element of a number field in power-basis coordinates (1, lambda, ..., lambda^(n-1)).
#[derive(Clone, PartialEq, Eq)]
pub struct NfElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl fmt::Debug for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NfElement{:?}", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl NfElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &NfElement) -> NfElement {
        assert_eq!(self.field, rhs.field);
        NfElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &NfElement) -> NfElement {
        assert_eq!(self.field, rhs.field);
        NfElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> NfElement {
        NfElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, rhs: &NfElement) -> NfElement {
        assert_eq!(self.field, rhs.field);
        NfElement {
            field: self.field.clone(),
            coords: self.field.mul_coords(&self.coords, &rhs.coords),
        }
    }

    pub fn scale(&self, q: &BigRational) -> NfElement {
        NfElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| a * q).collect(),
        }
    }

    /// Matrix of multiplication by this element in the power basis.
    pub fn mult_matrix(&self) -> RatMatrix {
        let n = self.field.degree();
        let mut m = RatMatrix::zero(n);
        let mut col = self.coords.clone();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = col[i].clone();
            }
            if j + 1 < n {
                // multiply by lambda
                let mut shifted = vec![BigRational::zero()];
                shifted.extend(col.iter().cloned());
                col = self.field.reduce(shifted);
            }
        }
        m
    }

    pub fn norm(&self) -> BigRational {
        self.mult_matrix().det()
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        let n = self.field.degree();
        (0..n).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn inverse(&self) -> Result<NfElement, Error> {
        let m = self.mult_matrix();
        let inv = m.inverse().ok_or(Error::Singular)?;
        let n = self.field.degree();
        let coords = (0..n).map(|i| inv[(i, 0)].clone()).collect();
        Ok(NfElement {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn pow(&self, e: i64) -> Result<NfElement, Error> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = self.field.one();
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(result)
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn has_integral_coords(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Monic minimal polynomial over Q (rational coefficients, lowest first).
    pub fn min_poly(&self) -> Vec<BigRational> {
        let n = self.field.degree();
        // Krylov vectors 1, x, x^2, ... ; find the first linear dependence.
        let mut powers: Vec<Vec<BigRational>> = vec![{
            let mut e = vec![BigRational::zero(); n];
            e[0] = BigRational::one();
            e
        }];
        let mut cur = powers[0].clone();
        for d in 1..=n {
            cur = self.field.mul_coords(&cur, &self.coords);
            powers.push(cur.clone());
            if let Some(rel) = linear_relation(&powers, n) {
                debug_assert_eq!(rel.len(), d + 1);
                return rel;
            }
        }
        unreachable!("degree-n power sequence always has a relation");
    }

    /// True iff the element is an algebraic integer (integral minimal polynomial).
    pub fn is_algebraic_integer(&self) -> bool {
        self.min_poly().iter().all(|c| c.is_integer())
    }

    pub fn min_poly_int(&self) -> Option<IntPoly> {
        let mp = self.min_poly();
        if mp.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(mp.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }
}

/// If the last vector is a rational combination of the previous ones, return
/// the monic relation coefficients c with sum c_i v_i = 0, c_last = 1.
fn linear_relation(vectors: &[Vec<BigRational>], dim: usize) -> Option<Vec<BigRational>> {
    let k = vectors.len();
    // Solve sum_{i<k-1} a_i v_i = v_{k-1} by Gaussian elimination.
    let cols = k - 1;
    let mut m: Vec<Vec<BigRational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..cols).map(|c| vectors[c][r].clone()).collect();
            row.push(vectors[k - 1][r].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let pr = (0..dim).find(|&r| !pivot_rows.contains(&r) && !m[r][c].is_zero());
        let pr = match pr {
            Some(r) => r,
            None => return None, // previous vectors dependent; caller adds one at a time so this means no relation ends at v_{k-1}
        };
        let inv = m[pr][c].clone().recip();
        for x in m[pr].iter_mut() {
            *x *= &inv;
        }
        for r in 0..dim {
            if r != pr && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..=cols {
                    let t = &f * &m[pr][cc];
                    m[r][cc] -= t;
                }
            }
        }
        pivot_rows.push(pr);
        rank += 1;
    }
    let _ = rank;
    // consistent iff non-pivot rows have zero rhs
    for r in 0..dim {
        if !pivot_rows.contains(&r) && !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut rel: Vec<BigRational> = vec![BigRational::zero(); k];
    for (c, &pr) in pivot_rows.iter().enumerate() {
        rel[c] = -m[pr][cols].clone();
    }
    rel[k - 1] = BigRational::one();
    Some(rel)
}

/// The index [O_K : Z[lambda]] split against a determinant: l1 carries the
/// primes dividing det, l2 the rest; m = l1 * l2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldIndex {
    pub m: BigInt,
    pub l1: BigInt,
    pub l2: BigInt,
}

/// Exact for quadratic fields (square part of the discriminant), and for
/// squarefree discriminant or an asserted power-basis maximal order.
pub fn field_index(
    k: &NumberField,
    det: &BigInt,
    assert_monogenic: bool,
) -> Result<FieldIndex, Error> {
    let m = if k.degree() == 2 {
        let disc = k.disc().clone();
        // disc = s^2 * d with d squarefree
        let mut s = BigInt::one();
        let mut d = disc;
        for (p, e) in crate::exact::primes::factorize(&d.abs()) {
            if e >= 2 {
                let half = p.pow(e / 2);
                s *= &half;
                d /= &half * &half;
            }
        }
        let four = BigInt::from(4);
        if d.mod_floor(&four) == BigInt::one() {
            s
        } else {
            // field discriminant is 4d; s is even here since disc = index^2 * 4d
            &s / BigInt::from(2)
        }
    } else if is_squarefree(k.disc()) || assert_monogenic {
        BigInt::one()
    } else {
        return Err(Error::Unsupported(
            "index undetermined: discriminant not squarefree and power basis not asserted maximal"
                .into(),
        ));
    };
    let mut l1 = BigInt::one();
    let mut l2 = m.clone();
    for (p, e) in crate::exact::primes::factorize(&m) {
        if (det % &p).is_zero() {
            let q = p.pow(e);
            l1 *= &q;
            l2 /= &q;
        }
    }
    Ok(FieldIndex { m, l1, l2 })
}

fn is_squarefree(n: &BigInt) -> bool {
    crate::exact::primes::factorize(&n.abs())
        .values()
        .all(|&e| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad13() -> NumberField {
        NumberField::new(IntPoly::from_i64(&[13, -1, 1])).unwrap()
    }

    #[test]
    fn norm_trace_lambda() {
        let k = quad13();
        let l = k.gen();
        assert_eq!(l.norm(), BigRational::from_integer(BigInt::from(13)));
        assert_eq!(l.trace(), BigRational::from_integer(BigInt::from(1)));
        let one = k.one();
        assert_eq!(one.norm(), BigRational::one());
        assert_eq!(one.trace(), BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn norm_in_sqrt3() {
        let k = NumberField::new(IntPoly::from_i64(&[-3, 0, 1])).unwrap();
        let x = k.from_rational(&BigRational::from_integer(BigInt::from(2)))
            .add(&k.gen());
        assert_eq!(x.norm(), BigRational::one()); // 4 - 3
        assert_eq!(x.trace(), BigRational::from_integer(BigInt::from(4)));
    }

    #[test]
    fn inverse_and_pow() {
        let k = NumberField::new(IntPoly::from_i64(&[-6, 2, -1, 1])).unwrap();
        let l = k.gen();
        let li = l.inverse().unwrap();
        assert_eq!(l.mul(&li), k.one());
        let x = l.pow(-3).unwrap();
        assert_eq!(x.mul(&l.pow(3).unwrap()), k.one());
        assert_eq!(l.norm(), BigRational::from_integer(BigInt::from(6)));
    }

    #[test]
    fn min_poly_of_generator_and_rational() {
        let k = NumberField::new(IntPoly::from_i64(&[-6, 2, -1, 1])).unwrap();
        let mp = k.gen().min_poly();
        let expect: Vec<BigRational> = [-6i64, 2, -1, 1]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        assert_eq!(mp, expect);
        let half = k.from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(half.min_poly().len(), 2);
        assert!(!half.is_algebraic_integer());
        assert!(k.gen().is_algebraic_integer());
    }

    #[test]
    fn field_index_examples() {
        // x^2-x-11: disc 45 = 9*5, d = 5 = 1 mod 4 -> m = 3
        let k = NumberField::new(IntPoly::from_i64(&[-11, -1, 1])).unwrap();
        let fi = field_index(&k, &BigInt::from(-11), false).unwrap();
        assert_eq!(fi.m, BigInt::from(3));
        assert_eq!(fi.l1, BigInt::one());
        assert_eq!(fi.l2, BigInt::from(3));
        // x^2-x+13: disc -51 squarefree -> m = 1
        let k = quad13();
        let fi = field_index(&k, &BigInt::from(13), false).unwrap();
        assert_eq!(fi.m, BigInt::one());
        // x^2-3: disc 12 = 4*3, d = 3 != 1 mod 4 -> index = 2/2 = 1
        let k = NumberField::new(IntPoly::from_i64(&[-3, 0, 1])).unwrap();
        let fi = field_index(&k, &BigInt::from(3), false).unwrap();
        assert_eq!(fi.m, BigInt::one());
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(
            NumberField::new(IntPoly::from_i64(&[-1, 0, 1])),
            Err(Error::Reducible)
        ));
    }
}
