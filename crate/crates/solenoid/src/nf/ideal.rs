use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exact::factor::factor_mod_p;
use crate::exact::hnf::{hnf, int_kernel, lattice_hnf};
use crate::exact::matrix::IntMatrix;
use crate::exact::poly::IntPoly;
use crate::exact::primes::valuation as int_valuation;

use super::field::{NfElement, NumberField};

/// Prime ideal (p, g(lambda)) of Z[lambda] with ramification index e and
/// residue degree f = deg g; valid when p does not divide the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub p: BigInt,
    pub gen_poly: IntPoly,
    pub e: u32,
    pub f: u32,
}

impl PrimeIdealData {
    pub fn norm(&self) -> BigInt {
        self.p.pow(self.f)
    }
}

/// Dedekind-Kummer splitting of p: factor h mod p and read off (e, f).
pub fn split_prime(k: &NumberField, p: &BigInt) -> Result<Vec<PrimeIdealData>, Error> {
    let facs = factor_mod_p(k.poly(), p);
    let mut out = Vec::new();
    let mut total = 0u32;
    for (g, e) in facs {
        let f = g.degree() as u32;
        total += e * f;
        out.push(PrimeIdealData {
            p: p.clone(),
            gen_poly: g.to_int_poly(),
            e,
            f,
        });
    }
    debug_assert_eq!(total as usize, k.degree());
    Ok(out)
}

/// Matrix of multiplication by an integer-coordinate element of Z[lambda].
fn int_mult_matrix(k: &NumberField, coords: &[BigInt]) -> IntMatrix {
    let n = k.degree();
    let h = k.poly();
    let mut m = IntMatrix::zero(n);
    let mut col: Vec<BigInt> = coords.to_vec();
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = col[i].clone();
        }
        if j + 1 < n {
            // multiply by lambda: shift then reduce by monic h
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(col.iter().cloned());
            let top = shifted.pop().unwrap();
            for i in 0..n {
                shifted[i] -= &top * h.coeff(i);
            }
            col = shifted;
        }
    }
    m
}

/// Fractional ideal of Z[lambda] as an HNF lattice with a denominator:
/// the ideal is (column span of num) / den. Canonical after reduce().
#[derive(Clone, Debug)]
pub struct FracIdeal {
    field: NumberField,
    num: IntMatrix,
    den: BigInt,
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.num == other.num && self.den == other.den
    }
}
impl Eq for FracIdeal {}

impl FracIdeal {
    /// The unit ideal Z[lambda].
    pub fn one(k: &NumberField) -> Self {
        FracIdeal {
            field: k.clone(),
            num: IntMatrix::identity(k.degree()),
            den: BigInt::one(),
        }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn num(&self) -> &IntMatrix {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    fn reduce(mut self) -> Self {
        let n = self.field.degree();
        let mut g = self.den.clone();
        'outer: for i in 0..n {
            for j in 0..n {
                g = g.gcd(&self.num[(i, j)]);
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        if !g.is_one() {
            for i in 0..n {
                for j in 0..n {
                    let q = &self.num[(i, j)] / &g;
                    self.num[(i, j)] = q;
                }
            }
            self.den /= &g;
        }
        self
    }

    /// Ideal generated as a Z[lambda]-module by the given elements.
    pub fn from_generators(k: &NumberField, gens: &[NfElement]) -> Result<Self, Error> {
        let n = k.degree();
        let den = gens
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator()));
        let mut cols = Vec::new();
        for g in gens {
            let int_coords: Vec<BigInt> = g
                .coords()
                .iter()
                .map(|c| {
                    let scaled = c * BigRational::from_integer(den.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect();
            let m = int_mult_matrix(k, &int_coords);
            for j in 0..n {
                cols.push((0..n).map(|i| m[(i, j)].clone()).collect());
            }
        }
        let num = lattice_hnf(n, &cols)?;
        Ok(FracIdeal {
            field: k.clone(),
            num,
            den,
        }
        .reduce())
    }

    pub fn principal(x: &NfElement) -> Result<Self, Error> {
        if x.is_zero() {
            return Err(Error::Input("zero element generates the zero ideal".into()));
        }
        Self::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn from_prime(k: &NumberField, pr: &PrimeIdealData) -> Result<Self, Error> {
        let p_elt = k.from_rational(&BigRational::from_integer(pr.p.clone()));
        let g_elt = k.from_int_poly(&pr.gen_poly);
        Self::from_generators(k, &[p_elt, g_elt])
    }

    /// Basis columns as field elements (num columns over den).
    fn basis_elements(&self) -> Vec<NfElement> {
        let n = self.field.degree();
        (0..n)
            .map(|j| {
                let coords = (0..n)
                    .map(|i| BigRational::new(self.num[(i, j)].clone(), self.den.clone()))
                    .collect();
                self.field.from_coords(coords).unwrap()
            })
            .collect()
    }

    pub fn product(&self, other: &FracIdeal) -> Result<FracIdeal, Error> {
        assert_eq!(self.field, other.field);
        let n = self.field.degree();
        let mut cols = Vec::new();
        for j in 0..n {
            let b: Vec<BigInt> = (0..n).map(|i| self.num[(i, j)].clone()).collect();
            let mb = int_mult_matrix(&self.field, &b);
            let prod = mb.mul(&other.num);
            for c in 0..n {
                cols.push((0..n).map(|r| prod[(r, c)].clone()).collect());
            }
        }
        let num = lattice_hnf(n, &cols)?;
        Ok(FracIdeal {
            field: self.field.clone(),
            num,
            den: &self.den * &other.den,
        }
        .reduce())
    }

    /// Inverse fractional ideal: {x in K : x * self inside Z[lambda]}.
    pub fn inverse(&self) -> Result<FracIdeal, Error> {
        let n = self.field.degree();
        let d = self.num.det().abs();
        if d.is_zero() {
            return Err(Error::Singular);
        }
        // Solve for y with (mult-by-basis) * (y / d) integral: kernel of
        // [B | -d*I] over Z, projected to the y block.
        let rows = n * n;
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n + rows);
        let mults: Vec<IntMatrix> = (0..n)
            .map(|j| {
                let b: Vec<BigInt> = (0..n).map(|i| self.num[(i, j)].clone()).collect();
                int_mult_matrix(&self.field, &b)
            })
            .collect();
        for c in 0..n {
            let mut col = Vec::with_capacity(rows);
            for m in &mults {
                for r in 0..n {
                    col.push(m[(r, c)].clone());
                }
            }
            cols.push(col);
        }
        for c in 0..rows {
            let mut col = vec![BigInt::zero(); rows];
            col[c] = -&d;
            cols.push(col);
        }
        let kernel = int_kernel(rows, &cols);
        let ys: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|v| v[..n].to_vec())
            .filter(|y| y.iter().any(|c| !c.is_zero()))
            .collect();
        let lattice = lattice_hnf(n, &ys)?;
        // self = num/den, so inverse = den * (lattice / d).
        let mut num = lattice;
        for i in 0..n {
            for j in 0..n {
                let v = &num[(i, j)] * &self.den;
                num[(i, j)] = v;
            }
        }
        Ok(FracIdeal {
            field: self.field.clone(),
            num,
            den: d,
        }
        .reduce())
    }

    pub fn power(&self, k: i64) -> Result<FracIdeal, Error> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut result = FracIdeal::one(&self.field);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&b)?;
            }
            b = b.product(&b)?;
            e >>= 1;
        }
        Ok(result)
    }

    pub fn norm(&self) -> BigRational {
        let n = self.field.degree() as u32;
        BigRational::new(self.num.det().abs(), self.den.pow(n))
    }

    pub fn contains(&self, x: &NfElement) -> bool {
        assert_eq!(*x.field(), self.field);
        let basis = self.num.to_rat();
        let inv = basis.inverse().expect("full-rank HNF basis");
        let n = self.field.degree();
        let y: Vec<BigRational> = x
            .coords()
            .iter()
            .map(|c| c * BigRational::from_integer(self.den.clone()))
            .collect();
        let sol = inv.mul_vec(&y);
        let _ = n;
        sol.iter().all(|c| c.is_integer())
    }

    pub fn is_subset_of(&self, other: &FracIdeal) -> bool {
        self.basis_elements().iter().all(|b| other.contains(b))
    }
}

/// Exponent of the prime P in the principal fractional ideal (x).
pub fn valuation(x: &NfElement, pr: &PrimeIdealData) -> Result<i64, Error> {
    if x.is_zero() {
        return Err(Error::Input("valuation of zero".into()));
    }
    let k = x.field();
    let d = x.denominator();
    let y = x.scale(&BigRational::from_integer(d.clone()));
    let num_ideal = FracIdeal::principal(&y)?;
    let p_ideal = FracIdeal::from_prime(k, pr)?;
    // largest v with (y) inside P^v
    let norm_y = num_ideal.norm().to_integer();
    let bound = (pr.e as i64) * (int_valuation(&norm_y, &pr.p) as i64) + 1;
    let mut v = 0i64;
    let mut pk = p_ideal.clone();
    while v < bound && num_ideal.is_subset_of(&pk) {
        v += 1;
        pk = pk.product(&p_ideal)?;
    }
    let den_shift = if d.is_one() {
        0
    } else {
        (pr.e as i64) * (int_valuation(&d, &pr.p) as i64)
    };
    Ok(v - den_shift)
}

/// HNF-canonicalized comparison helper used by tests and descriptions.
pub fn canonical_lattice(k: &NumberField, m: &IntMatrix) -> Result<IntMatrix, Error> {
    let r = hnf(m, true)?;
    let _ = k;
    Ok(r.h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> NumberField {
        NumberField::new(IntPoly::from_i64(&[-6, 2, -1, 1])).unwrap()
    }

    #[test]
    fn split_prime_cubic() {
        let k = cubic();
        // 2 = p1^2 * p2
        let mut s2 = split_prime(&k, &BigInt::from(2)).unwrap();
        s2.sort_by_key(|pr| pr.e);
        assert_eq!(s2.len(), 2);
        assert_eq!((s2[0].e, s2[0].f), (1, 1));
        assert_eq!((s2[1].e, s2[1].f), (2, 1));
        // 3 = q1 * q2 with residue degrees 1 and 2
        let mut s3 = split_prime(&k, &BigInt::from(3)).unwrap();
        s3.sort_by_key(|pr| pr.f);
        assert_eq!(s3.len(), 2);
        assert_eq!((s3[0].e, s3[0].f), (1, 1));
        assert_eq!((s3[1].e, s3[1].f), (1, 2));
        // 13 has a prime with f = 1
        let s13 = split_prime(&k, &BigInt::from(13)).unwrap();
        assert!(s13.iter().any(|pr| pr.f == 1));
    }

    #[test]
    fn ideal_identity_and_norm() {
        let k = cubic();
        let one = FracIdeal::one(&k);
        let l = FracIdeal::principal(&k.gen()).unwrap();
        assert_eq!(one.product(&l).unwrap(), l);
        assert_eq!(l.norm(), BigRational::from_integer(BigInt::from(6)));
        // norm multiplicativity over the primes above 2
        let s2 = split_prime(&k, &BigInt::from(2)).unwrap();
        let prod = FracIdeal::from_prime(&k, &s2[0])
            .unwrap()
            .product(&FracIdeal::from_prime(&k, &s2[1]).unwrap())
            .unwrap();
        let expected: BigRational = s2
            .iter()
            .map(|pr| BigRational::from_integer(pr.norm()))
            .product();
        assert_eq!(prod.norm(), expected);
    }

    #[test]
    fn principal_membership() {
        let k = cubic();
        let l = FracIdeal::principal(&k.gen()).unwrap();
        let l2 = k.gen().mul(&k.gen());
        assert!(l.contains(&l2));
        assert!(!l.contains(&k.one()));
    }

    #[test]
    fn inverse_gives_unit_product() {
        let k = cubic();
        let l = FracIdeal::principal(&k.gen()).unwrap();
        let inv = l.inverse().unwrap();
        let prod = l.product(&inv).unwrap();
        assert_eq!(prod, FracIdeal::one(&k));
        // inverse of a prime ideal as well
        let s2 = split_prime(&k, &BigInt::from(2)).unwrap();
        let p = FracIdeal::from_prime(&k, &s2[0]).unwrap();
        assert_eq!(p.product(&p.inverse().unwrap()).unwrap(), FracIdeal::one(&k));
    }

    #[test]
    fn cubic_lambda_valuations() {
        let k = cubic();
        // lambda O_K = p1 * q2 where p1 | 2 (the e=1 prime... identify by valuation)
        let s2 = split_prime(&k, &BigInt::from(2)).unwrap();
        let s3 = split_prime(&k, &BigInt::from(3)).unwrap();
        let lam = k.gen();
        let v2: Vec<i64> = s2.iter().map(|pr| valuation(&lam, pr).unwrap()).collect();
        let v3: Vec<i64> = s3.iter().map(|pr| valuation(&lam, pr).unwrap()).collect();
        // exactly one prime above 2 and one above 3 carries lambda, each with val 1
        assert_eq!(v2.iter().sum::<i64>(), 1);
        assert!(v2.iter().all(|&v| v >= 0));
        assert_eq!(v3.iter().sum::<i64>(), 1);
        assert!(v3.iter().all(|&v| v >= 0));
        // norms must match: prod N(P)^val = |N(lambda)| = 6
        let mut prod = BigInt::one();
        for (pr, v) in s2.iter().zip(&v2).chain(s3.iter().zip(&v3)) {
            prod *= pr.norm().pow(*v as u32);
        }
        assert_eq!(prod, BigInt::from(6));
    }

    #[test]
    fn xi_minus_one_valuation() {
        // xi = (2 + lambda - lambda^2) / lambda^3; val_{p1}(xi - 1) = -2
        // where p1 is the ramified prime above 2 (e = 2).
        let k = cubic();
        let lam = k.gen();
        let num = k
            .from_rational(&BigRational::from_integer(BigInt::from(2)))
            .add(&lam)
            .sub(&lam.mul(&lam));
        let xi = num.mul(&lam.pow(-3).unwrap());
        let ximl = xi.sub(&k.one());
        let s2 = split_prime(&k, &BigInt::from(2)).unwrap();
        let vals: Vec<(u32, i64)> = s2
            .iter()
            .map(|pr| (pr.e, valuation(&ximl, pr).unwrap()))
            .collect();
        // (xi-1) has valuation -2 at the prime above 2 with val_p(lambda)=1
        let lam_vals: Vec<i64> = s2.iter().map(|pr| valuation(&lam, pr).unwrap()).collect();
        let idx = lam_vals.iter().position(|&v| v == 1).unwrap();
        assert_eq!(vals[idx].1, -2);
    }

    #[test]
    fn valuation_of_one_is_zero() {
        let k = cubic();
        for p in [2i64, 3, 13] {
            for pr in split_prime(&k, &BigInt::from(p)).unwrap() {
                assert_eq!(valuation(&k.one(), &pr).unwrap(), 0);
            }
        }
    }
}
