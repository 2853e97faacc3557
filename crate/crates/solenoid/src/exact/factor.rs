use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{mod_inverse, IntPoly, ModPoly};
use super::primes::is_prime;

/// Extended Euclid in F_p[x]: returns (g, a, b) with a*f + b*h = g, g monic.
fn xgcd_mod(f: &ModPoly, h: &ModPoly) -> (ModPoly, ModPoly, ModPoly) {
    let p = f.p.clone();
    let mut r0 = f.clone();
    let mut r1 = h.clone();
    let mut a0 = ModPoly::one(&p);
    let mut a1 = ModPoly::zero(&p);
    let mut b0 = ModPoly::zero(&p);
    let mut b1 = ModPoly::one(&p);
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let a = a0.sub(&q.mul(&a1));
        let b = b0.sub(&q.mul(&b1));
        r0 = r1;
        r1 = r;
        a0 = a1;
        a1 = a;
        b0 = b1;
        b1 = b;
    }
    if r0.is_zero() {
        return (r0, a0, b0);
    }
    let inv = mod_inverse(&r0.leading(), &p).expect("prime modulus");
    (r0.scale(&inv), a0.scale(&inv), b0.scale(&inv))
}

/// Squarefree decomposition over F_p: list of (monic squarefree g_i, mult m_i)
/// with f = lc * prod g_i^{m_i}.
fn squarefree_decomp_mod(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let p = f.p.clone();
    let f = f.monic();
    if f.degree() == 0 {
        return vec![];
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p); take p-th root coefficientwise (Frobenius fixes F_p).
        let pu: u32 = p.to_string().parse().expect("small prime for p-th power");
        let mut root = Vec::new();
        let mut i = 0;
        while i <= f.degree() {
            root.push(f.coeff(i));
            i += pu as usize;
        }
        let g = ModPoly::new(&p, root);
        return squarefree_decomp_mod(&g)
            .into_iter()
            .map(|(h, m)| (h, m * pu))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&d);
    let mut w = f.divmod(&c).0;
    let mut i = 1u32;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let fac = w.divmod(&y).0;
        if fac.degree() > 0 {
            out.push((fac.monic(), i));
        }
        w = y.clone();
        c = c.divmod(&y).0;
        i += 1;
    }
    if c.degree() > 0 {
        // remaining part is a p-th power
        for (h, m) in squarefree_decomp_mod(&c) {
            out.push((h, m));
        }
    }
    out
}

/// x^(p^d) mod f by repeated Frobenius on x.
fn frobenius_power(f: &ModPoly, d: u32) -> ModPoly {
    let p = f.p.clone();
    let mut x = ModPoly::x(&p);
    for _ in 0..d {
        x = x.pow_mod(&p, f);
    }
    x
}

/// Deterministic pseudorandom polynomial of degree < bound over F_p.
fn pseudo_poly(p: &BigInt, bound: usize, seed: &mut u64) -> ModPoly {
    let mut coeffs = Vec::with_capacity(bound);
    for _ in 0..bound {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        coeffs.push(BigInt::from(*seed) .mod_floor(p));
    }
    ModPoly::new(p, coeffs)
}

/// Split a monic squarefree product of degree-d irreducibles (Cantor-Zassenhaus;
/// trace map for p = 2).
fn equal_degree_split(f: &ModPoly, d: u32, out: &mut Vec<ModPoly>) {
    let p = f.p.clone();
    if f.degree() == d as usize {
        out.push(f.monic());
        return;
    }
    let two = BigInt::from(2);
    let mut seed: u64 = 0x9e3779b97f4a7c15;
    loop {
        let r = pseudo_poly(&p, f.degree(), &mut seed);
        if r.degree() == 0 || r.is_zero() {
            continue;
        }
        let g = if p == two {
            // trace map r + r^2 + ... + r^(2^(d-1)) mod f
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..d {
                t = t.pow_mod(&two, f);
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            let mut e = BigInt::one();
            for _ in 0..d {
                e *= &p;
            }
            e = (e - 1) / &two;
            let s = r.pow_mod(&e, f);
            s.sub(&ModPoly::one(&p)).gcd(f)
        };
        if g.degree() > 0 && g.degree() < f.degree() {
            let h = f.divmod(&g).0;
            equal_degree_split(&g, d, out);
            equal_degree_split(&h, d, out);
            return;
        }
    }
}

/// Monic irreducible factorization of f over F_p: (factor, multiplicity),
/// sorted by (degree, coefficients).
pub fn factor_mod_p(f: &IntPoly, p: &BigInt) -> Vec<(ModPoly, u32)> {
    assert!(is_prime(p));
    let fm = ModPoly::from_int_poly(f, p);
    assert!(!fm.is_zero(), "polynomial vanishes mod p");
    let mut out: Vec<(ModPoly, u32)> = Vec::new();
    for (g, mult) in squarefree_decomp_mod(&fm) {
        // distinct-degree then equal-degree on the squarefree part
        let mut rem = g.monic();
        let mut d = 1u32;
        while rem.degree() >= 2 * d as usize {
            let xq = frobenius_power(&rem, d);
            let split = xq.sub(&ModPoly::x(p)).gcd(&rem);
            if split.degree() > 0 {
                let mut irr = Vec::new();
                equal_degree_split(&split, d, &mut irr);
                for h in irr {
                    out.push((h, mult));
                }
                rem = rem.divmod(&split).0;
            }
            d += 1;
        }
        if rem.degree() > 0 {
            out.push((rem.monic(), mult));
        }
    }
    out.sort_by(|a, b| {
        let da = a.0.degree();
        let db = b.0.degree();
        da.cmp(&db).then_with(|| {
            for i in (0..=da).rev() {
                match a.0.coeff(i).cmp(&b.0.coeff(i)) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    out
}

/// One linear Hensel step: given monic h with h = f*g mod p^k, f,g monic and
/// coprime mod p, returns (f', g') with h = f'*g' mod p^(k+1), f' = f mod p^k.
fn hensel_step(
    h: &IntPoly,
    f: &IntPoly,
    g: &IntPoly,
    a: &ModPoly,
    b: &ModPoly,
    p: &BigInt,
    pk: &BigInt,
) -> (IntPoly, IntPoly) {
    let diff = h.sub(&f.mul(g));
    let d_over: Vec<BigInt> = diff.coeffs().iter().map(|c| (c / pk).mod_floor(p)).collect();
    let d = ModPoly::new(p, d_over);
    let fp = ModPoly::from_int_poly(f, p);
    let gp = ModPoly::from_int_poly(g, p);
    // Solve u*f + v*g = d mod p with deg v < deg f: v = b*d mod f, u exact.
    let v = b.mul(&d).rem(&fp);
    let u = d.sub(&v.mul(&gp)).divmod(&fp).0;
    let _ = a;
    let lift = |base: &IntPoly, corr: &ModPoly| -> IntPoly {
        let mut c = base.coeffs().to_vec();
        c.resize(c.len().max(corr.degree() + 1), BigInt::zero());
        for i in 0..c.len() {
            c[i] += pk * corr.coeff(i);
        }
        IntPoly::new(c)
    };
    (lift(f, &v), lift(g, &u))
}

/// Lift a coprime factorization h = f*g mod p (f, g monic) to modulus p^n.
/// Coefficients of the result are reduced into [0, p^n).
pub fn hensel_lift_pair(
    h: &IntPoly,
    f0: &ModPoly,
    g0: &ModPoly,
    p: &BigInt,
    n: u32,
) -> (IntPoly, IntPoly) {
    let (gcd, a, b) = xgcd_mod(f0, g0);
    assert!(gcd.is_one(), "factors must be coprime mod p");
    let mut f = f0.to_int_poly();
    let mut g = g0.to_int_poly();
    let mut pk = p.clone();
    for _ in 1..n {
        let (f2, g2) = hensel_step(h, &f, &g, &a, &b, p, &pk);
        f = f2;
        g = g2;
        pk *= p;
    }
    (f.reduce_mod(&pk), g.reduce_mod(&pk))
}

/// Multiplicity of 0 as a root of h mod p.
pub fn zero_multiplicity_mod(h: &IntPoly, p: &BigInt) -> usize {
    let hm = ModPoly::from_int_poly(h, p);
    assert!(!hm.is_zero());
    let mut t = 0;
    while hm.coeff(t).is_zero() {
        t += 1;
    }
    t
}

/// Factor a monic h over Z_p (to precision p^n) as h = h1*h2 with h1(0) a
/// p-adic unit and h2 = x^t mod p (t the multiplicity of 0 mod p).
/// Degenerate splits return constant 1 for the empty side.
pub fn hensel_split(h: &IntPoly, p: &BigInt, n: u32) -> (IntPoly, IntPoly) {
    assert!(h.is_monic());
    let t = zero_multiplicity_mod(h, p);
    let deg = h.degree();
    let pn = p.pow(n);
    if t == 0 {
        return (h.reduce_mod(&pn), IntPoly::one());
    }
    if t == deg {
        return (IntPoly::one(), h.reduce_mod(&pn));
    }
    let f0 = ModPoly::new(p, {
        let mut c = vec![BigInt::zero(); t + 1];
        c[t] = BigInt::one();
        c
    });
    let g0 = {
        // h/x^t mod p
        let hm = ModPoly::from_int_poly(h, p);
        let coeffs = (t..=deg).map(|i| hm.coeff(i)).collect();
        ModPoly::new(p, coeffs)
    };
    let (xt_factor, unit_factor) = hensel_lift_pair(h, &f0, &g0, p, n);
    (unit_factor, xt_factor)
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

/// Bound on coefficient magnitudes of monic integer factors of monic f
/// (Mignotte-style: 2^deg * sqrt(sum f_i^2)).
fn factor_coeff_bound(f: &IntPoly) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let root = isqrt_ceil(&norm2);
    (BigInt::one() << f.degree()) * root
}

fn symmetric_reduce(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Factor a monic squarefree integer polynomial into monic irreducibles
/// (Zassenhaus: factor mod a good prime, Hensel lift, subset recombination).
fn factor_squarefree_monic(f: &IntPoly) -> Vec<IntPoly> {
    if f.degree() == 0 {
        return vec![];
    }
    if f.degree() == 1 {
        return vec![f.clone()];
    }
    // Pick a prime keeping f squarefree mod p.
    let disc = f.discriminant();
    let mut p = BigInt::from(2);
    loop {
        if !(&disc % &p).is_zero() {
            break;
        }
        p = &p + 1;
        while !is_prime(&p) {
            p = &p + 1;
        }
    }
    let modular: Vec<ModPoly> = factor_mod_p(f, &p).into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Hensel-lift the full factor list to p^n beyond twice the coefficient bound.
    let bound = factor_coeff_bound(f) * 2;
    let mut n = 1u32;
    let mut pn = p.clone();
    while pn <= bound {
        pn *= &p;
        n += 1;
    }
    let mut lifted: Vec<IntPoly> = Vec::with_capacity(modular.len());
    {
        // iterated pair lifting: split off one factor at a time
        let mut rem_target = f.reduce_mod(&pn);
        let mut rem_mod: ModPoly = modular[1..]
            .iter()
            .fold(modular[0].clone(), |acc, g| acc.mul(g))
            .clone();
        let mut h_exact = f.clone();
        for (i, g) in modular.iter().enumerate() {
            if i + 1 == modular.len() {
                lifted.push(rem_target.clone());
                break;
            }
            rem_mod = rem_mod.divmod(g).0;
            let (gf, gr) = hensel_lift_pair(&h_exact, g, &rem_mod, &p, n);
            lifted.push(gf);
            rem_target = gr.clone();
            h_exact = gr;
        }
    }
    // Subset recombination.
    let k = lifted.len();
    let mut used = vec![false; k];
    let mut out = Vec::new();
    let mut remaining = f.clone();
    let mut size = 1usize;
    while size <= k {
        let free: Vec<usize> = (0..k).filter(|&i| !used[i]).collect();
        if size > free.len() {
            break;
        }
        let mut found = false;
        for combo in combinations(&free, size) {
            let prod_mod = combo
                .iter()
                .fold(IntPoly::one(), |acc, &i| acc.mul(&lifted[i]).reduce_mod(&pn));
            let candidate = IntPoly::new(
                prod_mod
                    .coeffs()
                    .iter()
                    .map(|c| symmetric_reduce(c, &pn))
                    .collect(),
            );
            if candidate.is_monic() && remaining.divisible_by_monic(&candidate) {
                remaining = remaining.divmod_monic(&candidate).0;
                for &i in &combo {
                    used[i] = true;
                }
                out.push(candidate);
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        } else if remaining.degree() == 0 {
            break;
        }
    }
    if remaining.degree() > 0 {
        out.push(remaining);
    }
    out
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Monic gcd over Q of two integer polynomials, returned as a primitive
/// integer polynomial (monic when both inputs are monic).
fn gcd_over_q(f: &IntPoly, g: &IntPoly) -> IntPoly {
    use num_rational::BigRational;
    fn to_rat(p: &IntPoly) -> Vec<BigRational> {
        p.coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
    fn deg(p: &[BigRational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    let mut a = to_rat(f);
    let mut b = to_rat(g);
    loop {
        let db = match deg(&b) {
            Some(d) => d,
            None => break,
        };
        let da = match deg(&a) {
            Some(d) => d,
            None => {
                a = b;
                break;
            }
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let lcb = b[db].clone();
        for i in (db..=da).rev() {
            let q = &a[i] / &lcb;
            if q.is_zero() {
                continue;
            }
            for k in 0..=db {
                let t = &q * &b[k];
                a[i - db + k] -= t;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let d = match deg(&a) {
        Some(d) => d,
        None => return IntPoly::zero(),
    };
    a.truncate(d + 1);
    // clear denominators, take primitive part, normalize sign
    let lcm = a
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let p = IntPoly::new(ints).primitive_part();
    if p.leading().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Factor a monic integer polynomial into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients).
pub fn factor_over_z(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    assert!(f.is_monic());
    let sqf_gcd = gcd_over_q(f, &f.derivative());
    let squarefree = if sqf_gcd.degree() == 0 {
        f.clone()
    } else {
        f.divmod_monic(&sqf_gcd).0
    };
    let irreducibles = factor_squarefree_monic(&squarefree);
    let mut out = Vec::new();
    let mut rem = f.clone();
    for g in irreducibles {
        let mut m = 0u32;
        while rem.divisible_by_monic(&g) {
            rem = rem.divmod_monic(&g).0;
            m += 1;
        }
        out.push((g, m));
    }
    debug_assert_eq!(rem.degree(), 0);
    out.sort_by(|a, b| {
        let da = a.0.degree();
        let db = b.0.degree();
        da.cmp(&db)
            .then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_mod_p_cubic() {
        // x^3 - x^2 + 2x - 6 mod 13: has root 2 since 8-4+4-6 = 2? compute: 2.
        // Just check reconstruction instead of guessing roots.
        let f = IntPoly::from_i64(&[-6, 2, -1, 1]);
        for p in [2i64, 3, 5, 13, 229] {
            let p = BigInt::from(p);
            let facs = factor_mod_p(&f, &p);
            let prod = facs.iter().fold(ModPoly::one(&p), |acc, (g, m)| {
                let mut a = acc;
                for _ in 0..*m {
                    a = a.mul(g);
                }
                a
            });
            assert_eq!(prod, ModPoly::from_int_poly(&f, &p).monic(), "mod {p}");
        }
    }

    #[test]
    fn hensel_split_basic() {
        // x^2 - x + 13 mod 13: t = 1 (x * (x-1)); split to high precision.
        let h = IntPoly::from_i64(&[13, -1, 1]);
        let p = BigInt::from(13);
        let n = 10u32;
        let (h1, h2) = hensel_split(&h, &p, n);
        assert_eq!(h1.degree(), 1);
        assert_eq!(h2.degree(), 1);
        let pn = p.pow(n);
        let prod = h1.mul(&h2).reduce_mod(&pn);
        assert_eq!(prod, h.reduce_mod(&pn));
        // h2 = x + c with c divisible by 13; h1(0) is a unit mod 13
        assert!((h2.coeff(0) % &p).is_zero());
        assert!(!(h1.coeff(0) % &p).is_zero());
    }

    #[test]
    fn hensel_split_degenerate() {
        let h = IntPoly::from_i64(&[-11, -1, 1]); // constant term is a unit mod 3, so t = 0
        let p = BigInt::from(3);
        let (h1, h2) = hensel_split(&h, &p, 5);
        assert_eq!(h2, IntPoly::one());
        assert_eq!(h1.degree(), 2);
    }

    #[test]
    fn factor_over_z_cases() {
        // irreducible quadratic
        let f = IntPoly::from_i64(&[-11, -1, 1]);
        let facs = factor_over_z(&f);
        assert_eq!(facs.len(), 1);
        assert_eq!(facs[0], (f.clone(), 1));

        // (x-1)^2 (x+2)
        let f = IntPoly::from_i64(&[1, -2, 1]).mul(&IntPoly::from_i64(&[2, 1]));
        let facs = factor_over_z(&f);
        assert_eq!(facs.len(), 2);
        let total: u32 = facs.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 3);
        let rebuilt = facs.iter().fold(IntPoly::one(), |acc, (g, m)| {
            let mut a = acc;
            for _ in 0..*m {
                a = a.mul(g);
            }
            a
        });
        assert_eq!(rebuilt, f);

        // product of two distinct quadratics
        let f = IntPoly::from_i64(&[13, -1, 1]).mul(&IntPoly::from_i64(&[-11, -1, 1]));
        let facs = factor_over_z(&f);
        assert_eq!(facs.len(), 2);
        assert!(facs.iter().all(|(g, m)| g.degree() == 2 && *m == 1));
    }

    #[test]
    fn factor_over_z_cubic_irreducible() {
        let f = IntPoly::from_i64(&[-6, 2, -1, 1]);
        let facs = factor_over_z(&f);
        assert_eq!(facs.len(), 1);
        assert_eq!(facs[0].0, f);
    }
}
