use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::exact::poly::IntPoly;

use super::field::NfElement;

/// Euler totient for small m.
fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// m-th cyclotomic polynomial: (x^m - 1) / prod_{d | m, d < m} phi_d.
fn cyclotomic(m: u64) -> IntPoly {
    let mut num = {
        let mut c = vec![BigInt::zero(); m as usize + 1];
        c[0] = -BigInt::one();
        c[m as usize] = BigInt::one();
        IntPoly::new(c)
    };
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic(d);
            let (q, r) = num.divmod_monic(&phi_d);
            debug_assert!(r.is_zero());
            num = q;
        }
    }
    num
}

/// True iff x^k = 1 for some k >= 1: the minimal polynomial must be a
/// cyclotomic polynomial of order m with phi(m) <= [K : Q].
pub fn is_root_of_unity(x: &NfElement) -> bool {
    if x.is_zero() {
        return false;
    }
    let n = x.field().degree() as u64;
    let mp = match x.min_poly_int() {
        Some(p) => p,
        None => return false, // not an algebraic integer
    };
    // phi(m) <= n forces m <= 2n^2 + 2 comfortably for n <= 8
    for m in 1..=(2 * n * n + 2) {
        if totient(m) as u64 <= n && cyclotomic(m) == mp {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug)]
struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }
    fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn div(&self, o: &CRat) -> CRat {
        let d = &o.re * &o.re + &o.im * &o.im;
        CRat::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }
    fn abs2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    /// Round to denominator 2^bits to keep Newton iterates small.
    fn truncate(&self, bits: u32) -> CRat {
        CRat::new(truncate_rat(&self.re, bits), truncate_rat(&self.im, bits))
    }
}

fn truncate_rat(r: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = r * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

fn eval_poly_crat(h: &IntPoly, z: &CRat) -> CRat {
    let mut acc = CRat::new(BigRational::zero(), BigRational::zero());
    for c in h.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

/// Number of distinct real roots via a Sturm chain over Q.
fn sturm_real_root_count(h: &IntPoly) -> usize {
    fn to_rat(p: &IntPoly) -> Vec<BigRational> {
        p.coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
    fn deg(p: &[BigRational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn neg_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let db = deg(b).unwrap();
        let mut r = a.to_vec();
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let q = &r[dr] / &b[db];
            for k in 0..=db {
                let t = &q * &b[k];
                r[dr - db + k] -= t;
            }
            r[dr] = BigRational::zero();
        }
        r.iter().map(|c| -c).collect()
    }
    // sign at +inf: sign of leading coeff; at -inf: times (-1)^deg
    let mut chain = vec![to_rat(h), to_rat(&h.derivative())];
    loop {
        let last = chain.last().unwrap();
        if deg(last).is_none() || deg(last) == Some(0) {
            break;
        }
        let l = chain.len();
        let r = neg_rem(&chain[l - 2], &chain[l - 1]);
        if deg(&r).is_none() {
            break;
        }
        chain.push(r);
    }
    let signs_at = |at_pos: bool| -> Vec<i8> {
        chain
            .iter()
            .filter_map(|p| {
                let d = deg(p)?;
                let lc = &p[d];
                let mut s: i8 = if lc.is_positive() { 1 } else { -1 };
                if !at_pos && d % 2 == 1 {
                    s = -s;
                }
                Some(s)
            })
            .collect()
    };
    let count_changes = |v: &[i8]| v.windows(2).filter(|w| w[0] != w[1]).count();
    count_changes(&signs_at(false)) - count_changes(&signs_at(true))
}

/// All roots of h in f64 precision via Durand-Kerner; h squarefree.
fn durand_kerner(h: &IntPoly) -> Vec<(f64, f64)> {
    let n = h.degree();
    let coeffs: Vec<f64> = h.coeffs().iter().map(|c| big_to_f64(c)).collect();
    let lead = coeffs[n];
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);
    let eval = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = (
                acc.0 * z.0 - acc.1 * z.1 + c,
                acc.0 * z.1 + acc.1 * z.0,
            );
        }
        acc
    };
    let cdiv = |a: (f64, f64), b: (f64, f64)| -> (f64, f64) {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    // initial guesses spread on a circle, slightly off the real axis
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.42;
            (radius * theta.cos() * 0.7, radius * theta.sin() * 0.7 + 0.1)
        })
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut denom = (lead, 0.0);
            for j in 0..n {
                if j != i {
                    denom = cmul(denom, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let delta = cdiv(eval(z[i]), denom);
            z[i] = (z[i].0 - delta.0, z[i].1 - delta.1);
            moved += delta.0.abs() + delta.1.abs();
        }
        if moved < 1e-13 {
            break;
        }
    }
    z
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::MAX)
}

/// Roots of the (squarefree) defining polynomial h, refined in exact rational
/// arithmetic: real roots and one representative of each complex pair.
pub struct FieldRoots {
    pub real: Vec<BigRational>,
    pub complex: Vec<(BigRational, BigRational)>,
}

pub fn field_roots(h: &IntPoly, precision_bits: u32) -> Result<FieldRoots, Error> {
    let n = h.degree();
    let approx = durand_kerner(h);
    let mut real: Vec<f64> = Vec::new();
    let mut complex: Vec<(f64, f64)> = Vec::new();
    for (re, im) in &approx {
        if im.abs() < 1e-7 {
            real.push(*re);
        } else if *im > 0.0 {
            complex.push((*re, *im));
        }
    }
    if real.len() != sturm_real_root_count(h) || real.len() + 2 * complex.len() != n {
        return Err(Error::Precision(
            "real/complex root classification failed; increase precision".into(),
        ));
    }
    let work_bits = precision_bits + 64;
    let dh = h.derivative();
    let newton_steps = 64 - (precision_bits as u64).leading_zeros() + 4;
    let mut real_refined = Vec::new();
    for r0 in real {
        let mut z = truncate_rat(&approx_rat(r0), work_bits);
        for _ in 0..newton_steps {
            let num = h.eval_rat(&z);
            let den = dh.eval_rat(&z);
            if den.is_zero() {
                return Err(Error::Precision("derivative vanished during refinement".into()));
            }
            z = truncate_rat(&(&z - num / den), work_bits);
        }
        real_refined.push(z);
    }
    let mut complex_refined = Vec::new();
    for (re0, im0) in complex {
        let mut z = CRat::new(approx_rat(re0), approx_rat(im0)).truncate(work_bits);
        for _ in 0..newton_steps {
            let num = eval_poly_crat(h, &z);
            let den = eval_poly_crat(&dh, &z);
            if den.abs2().is_zero() {
                return Err(Error::Precision("derivative vanished during refinement".into()));
            }
            z = z.sub(&num.div(&den)).truncate(work_bits);
        }
        complex_refined.push((z.re, z.im));
    }
    Ok(FieldRoots {
        real: real_refined,
        complex: complex_refined,
    })
}

fn approx_rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Normalized absolute values of x at the infinite places: |sigma(x)| at real
/// places, |sigma(x)|^2 at complex pairs. Their product equals |N(x)| within
/// 2^(1 - precision_bits) relative error (verified; else an error).
pub fn archimedean_abs(x: &NfElement, precision_bits: u32) -> Result<Vec<BigRational>, Error> {
    if x.is_zero() {
        return Err(Error::Input("archimedean absolute values of zero".into()));
    }
    let h = x.field().poly();
    let roots = field_roots(h, precision_bits)?;
    // x = q(lambda): evaluate q at each root of h
    let q_coeffs = x.coords();
    let eval_real = |r: &BigRational| -> BigRational {
        let mut acc = BigRational::zero();
        for c in q_coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc.abs()
    };
    let eval_complex = |re: &BigRational, im: &BigRational| -> BigRational {
        let z = CRat::new(re.clone(), im.clone());
        let mut acc = CRat::new(BigRational::zero(), BigRational::zero());
        for c in q_coeffs.iter().rev() {
            acc = acc.mul(&z);
            acc.re += c;
        }
        acc.abs2()
    };
    let mut out: Vec<BigRational> = roots.real.iter().map(eval_real).collect();
    out.extend(roots.complex.iter().map(|(re, im)| eval_complex(re, im)));
    // product-formula validation
    let prod: BigRational = out.iter().product();
    let norm = x.norm().abs();
    let tol = BigRational::new(BigInt::from(2), BigInt::one() << precision_bits);
    let rel_err = if norm.is_zero() {
        prod.clone()
    } else {
        ((&prod - &norm) / &norm).abs()
    };
    if rel_err > tol {
        return Err(Error::Precision(format!(
            "product formula check failed at {precision_bits} bits; try higher precision"
        )));
    }
    Ok(out)
}

/// Natural log of a positive rational, via exponent extraction (safe for
/// values far outside f64 range).
pub fn log_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive());
    log_big(r.numer()) - log_big(r.denom())
}

fn log_big(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 52 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 52;
    let top = (&n >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn roots_of_unity() {
        let k = NumberField::new(IntPoly::from_i64(&[13, -1, 1])).unwrap();
        assert!(is_root_of_unity(&k.one()));
        assert!(is_root_of_unity(&k.one().neg()));
        assert!(!is_root_of_unity(&k.gen()));
        let k6 = NumberField::new(IntPoly::from_i64(&[1, -1, 1])).unwrap();
        assert!(is_root_of_unity(&k6.gen())); // order 6
    }

    #[test]
    fn archimedean_quadratic_complex() {
        // x^2 - x + 13: one complex pair, |lambda|^2 = 13
        let k = NumberField::new(IntPoly::from_i64(&[13, -1, 1])).unwrap();
        let vals = archimedean_abs(&k.gen(), 128).unwrap();
        assert_eq!(vals.len(), 1);
        let diff = (&vals[0] - BigRational::from_integer(BigInt::from(13))).abs();
        assert!(diff < BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn archimedean_cubic_product() {
        // x^3 - x^2 + 2x - 6: one real root, one complex pair; product = |N(lambda)| = 6
        let k = NumberField::new(IntPoly::from_i64(&[-6, 2, -1, 1])).unwrap();
        let vals = archimedean_abs(&k.gen(), 128).unwrap();
        assert_eq!(vals.len(), 2);
        let prod: BigRational = vals.iter().product();
        let diff = (&prod - BigRational::from_integer(BigInt::from(6))).abs();
        assert!(diff < BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn rational_scalar_places() {
        let k = NumberField::new(IntPoly::from_i64(&[-3, 0, 1])).unwrap(); // two real places
        let q = k.from_rational(&BigRational::from_integer(BigInt::from(-5)));
        let vals = archimedean_abs(&q, 96).unwrap();
        assert_eq!(vals.len(), 2);
        for v in &vals {
            let d = (v - BigRational::from_integer(BigInt::from(5))).abs();
            assert!(d < BigRational::new(BigInt::one(), BigInt::one() << 64));
        }
    }

    #[test]
    fn log_rational_large() {
        let big = BigInt::from(10).pow(100);
        let r = BigRational::from_integer(big);
        let l = log_rational(&r);
        assert!((l - 100.0 * std::f64::consts::LN_10).abs() < 1e-6);
    }
}
