use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::decision::{Certificate, Decision, Verdict};
use crate::error::Error;
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::poly::IntPoly;
use crate::exact::primes::{factorize, prime_divisors};
use crate::nf::{field_index, NfElement, NumberField};
use crate::padic::{local_end_check, t_multiplicity};

/// Arithmetic invariants of G_A: the primes P dividing det A, the subset P'
/// carrying nontrivial local structure, and the multiplicities t_p.
#[derive(Clone, Debug)]
pub struct GaInvariants {
    pub a: IntMatrix,
    pub det: BigInt,
    pub h: IntPoly,
    pub p: Vec<BigInt>,
    pub p_prime: Vec<BigInt>,
    pub t: BTreeMap<BigInt, usize>,
    pub rad_det: BigInt,
}

pub fn invariants(a: &IntMatrix) -> Result<GaInvariants, Error> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let h = a.char_poly();
    let n = a.dim();
    let p = prime_divisors(&det);
    let mut t = BTreeMap::new();
    let mut p_prime = Vec::new();
    for q in &p {
        let tq = t_multiplicity(&h, q);
        if tq < n {
            p_prime.push(q.clone());
        }
        t.insert(q.clone(), tq);
    }
    let rad_det = p.iter().product();
    Ok(GaInvariants {
        a: a.clone(),
        det,
        h,
        p,
        p_prime,
        t,
        rad_det,
    })
}

/// True iff the denominator's prime support lies inside the given prime list.
pub fn in_ring(q: &BigRational, support: &[BigInt]) -> bool {
    let den = q.denom();
    if den.is_one() {
        return true;
    }
    factorize(den).keys().all(|p| support.contains(p))
}

fn matrix_in_ring(t: &RatMatrix, support: &[BigInt]) -> Option<BigInt> {
    let n = t.dim();
    for i in 0..n {
        for j in 0..n {
            let den = t[(i, j)].denom();
            if den.is_one() {
                continue;
            }
            for p in factorize(den).keys() {
                if !support.contains(p) {
                    return Some(p.clone());
                }
            }
        }
    }
    None
}

/// Normalized reducible 2-D data: S A S^-1 = M diag(lambda1, lambda2) M^-1
/// with M = [[1, u], [0, v]], (u, v) = 1, v | lambda1 - lambda2.
#[derive(Clone, Debug)]
pub struct TwoDimNormalization {
    pub lambda1: BigInt,
    pub lambda2: BigInt,
    pub u: BigInt,
    pub v: BigInt,
    pub s: IntMatrix,
}

#[derive(Clone, Debug)]
pub enum Classify2d {
    Easy,
    IrreducibleA,
    CaseB(TwoDimNormalization),
    CaseC(TwoDimNormalization),
}

fn primitive_eigenvector(a: &IntMatrix, lambda: &BigInt) -> Vec<BigInt> {
    // kernel vector of (A - lambda I) for a 2x2 with eigenvalue lambda
    let m00 = &a[(0, 0)] - lambda;
    let m01 = a[(0, 1)].clone();
    let m10 = a[(1, 0)].clone();
    let m11 = &a[(1, 1)] - lambda;
    let (x, y) = if !m00.is_zero() || !m01.is_zero() {
        (m01.clone(), -m00.clone())
    } else {
        (m11.clone(), -m10.clone())
    };
    if x.is_zero() && y.is_zero() {
        // (A - lambda I) = 0: any vector works
        return vec![BigInt::one(), BigInt::zero()];
    }
    let g = x.gcd(&y);
    vec![x / &g, y / &g]
}

/// Unimodular S with S * u = e1 for a primitive integer vector u = (p, q).
fn completing_transform(u: &[BigInt]) -> IntMatrix {
    let (p, q) = (u[0].clone(), u[1].clone());
    let eg = p.extended_gcd(&q);
    debug_assert!(eg.gcd.is_one());
    // x*p + y*q = 1; S = [[x, y], [-q, p]] has det 1 and S u = (1, 0)
    let mut s = IntMatrix::zero(2);
    s[(0, 0)] = eg.x;
    s[(0, 1)] = eg.y;
    s[(1, 0)] = -q;
    s[(1, 1)] = p;
    s
}

pub fn classify2d(a: &IntMatrix) -> Result<Classify2d, Error> {
    if a.dim() != 2 {
        return Err(Error::Input("classification requires a 2x2 matrix".into()));
    }
    let inv = invariants(a)?;
    if inv.p.is_empty() || inv.p_prime.is_empty() {
        return Ok(Classify2d::Easy);
    }
    let facs = crate::exact::factor::factor_over_z(&inv.h);
    if facs.len() == 1 && facs[0].1 == 1 && facs[0].0.degree() == 2 {
        return Ok(Classify2d::IrreducibleA);
    }
    // reducible with P' nonempty: two distinct integer eigenvalues
    let mut roots: Vec<BigInt> = facs
        .iter()
        .flat_map(|(g, m)| std::iter::repeat(-g.coeff(0)).take(*m as usize))
        .collect();
    debug_assert_eq!(roots.len(), 2);
    // orientation: case (c) wants rad(lambda2) | rad(lambda1); ties by |.|
    roots.sort_by(|x, y| y.abs().cmp(&x.abs()).then(x.cmp(y)));
    let rad: Vec<Vec<BigInt>> = roots.iter().map(prime_divisors).collect();
    let divides = |r1: &[BigInt], r2: &[BigInt]| r1.iter().all(|p| r2.contains(p));
    let (l1, l2, case_c) = if divides(&rad[1], &rad[0]) {
        (roots[0].clone(), roots[1].clone(), true)
    } else if divides(&rad[0], &rad[1]) {
        (roots[1].clone(), roots[0].clone(), true)
    } else {
        (roots[0].clone(), roots[1].clone(), false)
    };
    let u1 = primitive_eigenvector(a, &l1);
    let s = completing_transform(&u1);
    let sinv = s.to_rat().inverse().ok_or(Error::Singular)?;
    let aprime = s.to_rat().mul(&a.to_rat()).mul(&sinv);
    debug_assert!(aprime.is_integral());
    let ap = aprime.to_int().unwrap();
    debug_assert!(ap[(1, 0)].is_zero());
    debug_assert_eq!(ap[(0, 0)], l1);
    debug_assert_eq!(ap[(1, 1)], l2);
    let b = ap[(0, 1)].clone();
    let d = &l2 - &l1;
    let g = b.gcd(&d);
    let g = if g.is_zero() { d.abs() } else { g };
    let (mut u, mut v) = (&b / &g, &d / &g);
    if v.is_negative() {
        u = -u;
        v = -v;
    }
    let norm = TwoDimNormalization {
        lambda1: l1,
        lambda2: l2,
        u,
        v,
        s,
    };
    Ok(if case_c {
        Classify2d::CaseC(norm)
    } else {
        Classify2d::CaseB(norm)
    })
}

fn z_lambda_inv_member(x: &BigRational, lambda: &BigInt) -> bool {
    in_ring(x, &prime_divisors(lambda))
}

/// Closed-form membership for the two reducible 2-D cases. Returns
/// (member, case label, detail).
fn closed_form_2d(
    cls: &Classify2d,
    inv: &GaInvariants,
    t: &RatMatrix,
) -> Option<(bool, String, String)> {
    let (norm, case_b) = match cls {
        Classify2d::CaseB(n) => (n, true),
        Classify2d::CaseC(n) => (n, false),
        _ => return None,
    };
    let s = norm.s.to_rat();
    let sinv = s.inverse().expect("unimodular");
    let tp = s.mul(t).mul(&sinv);
    if case_b {
        // T' = M diag(x1, x2) M^-1 with x_i in Z[lambda_i^-1], (x1-x2)/v in R
        let mut m = RatMatrix::zero(2);
        m[(0, 0)] = BigRational::one();
        m[(0, 1)] = BigRational::from_integer(norm.u.clone());
        m[(1, 1)] = BigRational::from_integer(norm.v.clone());
        let minv = m.inverse().expect("v nonzero");
        let x = minv.mul(&tp).mul(&m);
        if !x[(0, 1)].is_zero() || !x[(1, 0)].is_zero() {
            return Some((false, "case-b".into(), "not diagonal in the eigenbasis".into()));
        }
        let x1 = x[(0, 0)].clone();
        let x2 = x[(1, 1)].clone();
        if !z_lambda_inv_member(&x1, &norm.lambda1) || !z_lambda_inv_member(&x2, &norm.lambda2) {
            return Some((false, "case-b".into(), "eigenvalue outside its localized ring".into()));
        }
        let diff = (&x1 - &x2) / BigRational::from_integer(norm.v.clone());
        if !in_ring(&diff, &inv.p) {
            return Some((false, "case-b".into(), "congruence (x1-x2)/v fails".into()));
        }
        Some((true, "case-b".into(), format!("x1={x1}, x2={x2}")))
    } else {
        // T' upper-triangular in M_2(R) with z in Z[lambda2^-1]
        if !tp[(1, 0)].is_zero() {
            return Some((false, "case-c".into(), "not upper-triangular in the normalized basis".into()));
        }
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            if !in_ring(&tp[(i, j)], &inv.p) {
                return Some((false, "case-c".into(), format!("entry ({i},{j}) outside R")));
            }
        }
        if !z_lambda_inv_member(&tp[(1, 1)], &norm.lambda2) {
            return Some((false, "case-c".into(), "corner entry outside Z[lambda2^-1]".into()));
        }
        Some((true, "case-c".into(), format!("z={}", tp[(1, 1)])))
    }
}

/// Closed-form membership for reducible 2-D defining matrices, when the
/// classification applies; None outside those cases. The denominator-support
/// requirement is part of membership.
pub fn closed_form_membership(a: &IntMatrix, t: &RatMatrix) -> Result<Option<bool>, Error> {
    let inv = invariants(a)?;
    let cls = classify2d(a)?;
    if !matches!(cls, Classify2d::CaseB(_) | Classify2d::CaseC(_)) {
        return Ok(None);
    }
    if matrix_in_ring(t, &inv.p).is_some() {
        return Ok(Some(false));
    }
    Ok(closed_form_2d(&cls, &inv, t).map(|(m, _, _)| m))
}

fn padic_path(inv: &GaInvariants, t: &RatMatrix, precision_override: Option<u32>) -> Decision {
    let mut transcripts = Vec::new();
    for p in &inv.p_prime {
        let d = local_end_check(&inv.a, t, p, precision_override);
        match d.verdict {
            Verdict::Inconclusive => return d,
            _ => {
                if let Certificate::LocalChecks { transcripts: ts } = d.certificate {
                    transcripts.extend(ts);
                }
                if d.verdict == Verdict::No {
                    return Decision::no(Certificate::LocalChecks { transcripts });
                }
            }
        }
    }
    Decision::yes(Certificate::LocalChecks { transcripts })
}

/// T ∈ End(G_A): denominator support inside P, then the per-prime local checks
/// (with 2-D closed forms cross-checked against the p-adic path).
pub fn is_endomorphism(a: &IntMatrix, t: &RatMatrix, precision_override: Option<u32>) -> Decision {
    let inv = match invariants(a) {
        Ok(i) => i,
        Err(e) => return Decision::inconclusive(format!("{e}")),
    };
    if let Some(p) = matrix_in_ring(t, &inv.p) {
        return Decision::no(Certificate::DenominatorOutsideSupport {
            prime: p.to_string(),
        });
    }
    if inv.p.is_empty() {
        // R = Z and the support check above already certified integrality
        return Decision::yes(Certificate::Integrality {
            ok: true,
            detail: "unimodular defining matrix: membership is integrality".into(),
        });
    }
    if inv.p_prime.is_empty() {
        return Decision::yes(Certificate::Integrality {
            ok: true,
            detail: "every localization is a full Q_p-space: membership is the denominator test".into(),
        });
    }
    if a.dim() == 2 {
        if let Ok(cls) = classify2d(a) {
            if let Some((member, case, detail)) = closed_form_2d(&cls, &inv, t) {
                let pd = padic_path(&inv, t, precision_override);
                let agrees = match pd.verdict {
                    Verdict::Yes => member,
                    Verdict::No => !member,
                    Verdict::Inconclusive => return pd,
                };
                if !agrees {
                    return Decision::inconclusive(format!(
                        "closed-form ({case}) and local checks disagree: {detail}"
                    ));
                }
                let cert = Certificate::ClosedForm {
                    case,
                    ok: member,
                    detail,
                };
                return if member {
                    Decision::yes(cert)
                } else {
                    Decision::no(cert)
                };
            }
        }
    }
    padic_path(&inv, t, precision_override)
}

/// Bounded search for the defining property: for each m <= depth_m, the least
/// k <= depth_k with A^k T A^-m integral. Sound NO only on denominator support.
pub fn bounded_oracle(a: &IntMatrix, t: &RatMatrix, depth_m: u32, depth_k: u32) -> Decision {
    let inv = match invariants(a) {
        Ok(i) => i,
        Err(e) => return Decision::inconclusive(format!("{e}")),
    };
    if let Some(p) = matrix_in_ring(t, &inv.p) {
        return Decision::no(Certificate::DenominatorOutsideSupport {
            prime: p.to_string(),
        });
    }
    let ar = a.to_rat();
    let ainv = ar.inverse().expect("nonsingular");
    let mut witnesses = Vec::new();
    let mut cur = t.clone(); // T * A^-m
    for m in 0..=depth_m {
        let mut power = cur.clone(); // A^k * T * A^-m
        let mut found = None;
        for k in 0..=depth_k {
            if power.is_integral() {
                found = Some(k);
                break;
            }
            power = ar.mul(&power);
        }
        witnesses.push((m, found));
        cur = cur.mul(&ainv);
    }
    Decision {
        verdict: Verdict::Inconclusive,
        certificate: Certificate::OracleWitnesses { witnesses },
    }
}

/// True iff the bounded search found a witness k for every depth m.
pub fn oracle_positive(d: &Decision) -> Option<bool> {
    match &d.certificate {
        Certificate::OracleWitnesses { witnesses } => {
            Some(witnesses.iter().all(|(_, k)| k.is_some()))
        }
        _ => None,
    }
}

/// The eigenvalue embedding: T commuting with A maps to q(lambda) where
/// T = q(A). Errors when T does not commute with A.
pub fn iota(a: &IntMatrix, t: &RatMatrix) -> Result<NfElement, Error> {
    let ar = a.to_rat();
    if ar.mul(t) != t.mul(&ar) {
        return Err(Error::Input(
            "not in the commutant of the defining matrix (certifies non-membership \
             when the commutativity hypotheses hold)"
                .into(),
        ));
    }
    let h = a.char_poly();
    let k = NumberField::new(h)?;
    let n = a.dim();
    // Krylov solve: [e, Ae, ..., A^(n-1)e] c = T e with e = e1 (cyclic since
    // the characteristic polynomial is irreducible).
    let mut krylov = RatMatrix::zero(n);
    let mut col: Vec<BigRational> = (0..n)
        .map(|i| {
            if i == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    for j in 0..n {
        for i in 0..n {
            krylov[(i, j)] = col[i].clone();
        }
        col = ar.mul_vec(&col);
    }
    let e1: Vec<BigRational> = (0..n)
        .map(|i| {
            if i == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let rhs = t.mul_vec(&e1);
    let kinv = krylov.inverse().ok_or(Error::Singular)?;
    let coeffs = kinv.mul_vec(&rhs);
    let x = k.from_coords(coeffs)?;
    Ok(x)
}

/// Structured description of End(G_A) in the classified cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum EndDescription {
    AllInteger,
    AllR {
        inverted_primes: Vec<String>,
    },
    TwoDimCaseB {
        lambda1: String,
        lambda2: String,
        v: String,
        congruence: String,
    },
    TwoDimCaseC {
        lambda2: String,
        shape: String,
    },
    QuadraticIrr {
        poly: String,
        omega: String,
        alpha: String,
        generators: String,
    },
    MonogenicIrr {
        poly: String,
        statement: String,
    },
    IrrGeneral {
        poly: String,
        statement: String,
    },
    Unclassified {
        reason: String,
    },
}

/// omega in power-basis coordinates: (1 + sqrt(d))/2 when d = 1 mod 4, else
/// sqrt(d), where disc(h) = s^2 d with d squarefree and sqrt(d) = (2 lambda - tr)/s.
fn quadratic_omega(k: &NumberField) -> NfElement {
    let disc = k.disc().clone();
    let mut s = BigInt::one();
    let mut d = disc;
    for (p, e) in factorize(&d.abs()) {
        if e >= 2 {
            let half = p.pow(e / 2);
            s *= &half;
            d /= &half * &half;
        }
    }
    let tr = -k.poly().coeff(1); // h = x^2 - tr x + nm
    let lam = k.gen();
    let sqrt_d = lam
        .scale(&BigRational::from_integer(BigInt::from(2)))
        .sub(&k.from_rational(&BigRational::from_integer(tr)))
        .scale(&BigRational::new(BigInt::one(), s));
    let four = BigInt::from(4);
    if d.mod_floor(&four).is_one() {
        k.one()
            .add(&sqrt_d)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    } else {
        sqrt_d
    }
}

/// The matrix realization T(x) = c0 I + c1 A of x = c0 + c1 lambda.
fn quadratic_transform(a: &IntMatrix, x: &NfElement) -> RatMatrix {
    let c = x.coords();
    let mut t = a.to_rat().scale(&c[1]);
    for i in 0..2 {
        t[(i, i)] += &c[0];
    }
    t
}

/// Least positive alpha with T(alpha * omega) in M_2(R): the endomorphism ring
/// is generated by {1, alpha*omega} over Z[lambda^{+-1}].
pub fn alpha_generator(a: &IntMatrix) -> Result<(BigInt, EndDescription), Error> {
    if a.dim() != 2 {
        return Err(Error::Input("alpha generator requires a 2x2 matrix".into()));
    }
    let inv = invariants(a)?;
    if inv.p_prime.is_empty() {
        return Err(Error::Input("no primes with nontrivial local structure".into()));
    }
    let k = NumberField::new(inv.h.clone())?; // errors if reducible
    let fi = field_index(&k, &inv.det, false)?;
    let omega = quadratic_omega(&k);
    fn all_divisors(n: &BigInt) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for (p, e) in factorize(n) {
            let mut next = Vec::new();
            for d in &out {
                let mut q = BigInt::one();
                for _ in 0..=e {
                    next.push(d * &q);
                    q *= &p;
                }
            }
            out = next;
        }
        out.sort();
        out
    }
    let mut alpha = fi.l2.clone();
    for b in all_divisors(&fi.l2) {
        let cand = omega.scale(&BigRational::from_integer(b.clone()));
        let t = quadratic_transform(a, &cand);
        if matrix_in_ring(&t, &inv.p).is_none() {
            alpha = b;
            break;
        }
    }
    let desc = EndDescription::QuadraticIrr {
        poly: format!("{:?}", inv.h),
        omega: format!(
            "omega coords {:?}",
            omega.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>()
        ),
        alpha: alpha.to_string(),
        generators: format!("{{1, {alpha}*omega}} over Z[lambda^(+-1)]"),
    };
    Ok((alpha, desc))
}

/// True when the power basis is known to generate the maximal order:
/// quadratic index computation, squarefree discriminant, or user assertion.
fn monogenic_known(k: &NumberField, det: &BigInt, assert_monogenic: bool) -> bool {
    match field_index(k, det, assert_monogenic) {
        Ok(fi) => fi.m.is_one(),
        Err(_) => false,
    }
}

pub fn end_ring_description(a: &IntMatrix, assert_monogenic: bool) -> Result<EndDescription, Error> {
    let inv = invariants(a)?;
    if inv.p.is_empty() {
        return Ok(EndDescription::AllInteger);
    }
    if inv.p_prime.is_empty() {
        return Ok(EndDescription::AllR {
            inverted_primes: inv.p.iter().map(|p| p.to_string()).collect(),
        });
    }
    let n = a.dim();
    if n == 2 {
        match classify2d(a)? {
            Classify2d::Easy => unreachable!("handled by the fast paths above"),
            Classify2d::IrreducibleA => {
                let (_, desc) = alpha_generator(a)?;
                return Ok(desc);
            }
            Classify2d::CaseB(nm) => {
                return Ok(EndDescription::TwoDimCaseB {
                    lambda1: nm.lambda1.to_string(),
                    lambda2: nm.lambda2.to_string(),
                    v: nm.v.to_string(),
                    congruence: format!("(x1 - x2)/{} in Z[1/det]", nm.v),
                });
            }
            Classify2d::CaseC(nm) => {
                return Ok(EndDescription::TwoDimCaseC {
                    lambda2: nm.lambda2.to_string(),
                    shape: "upper-triangular over Z[1/det], corner in Z[lambda2^-1]".into(),
                });
            }
        }
    }
    let facs = crate::exact::factor::factor_over_z(&inv.h);
    let irreducible = facs.len() == 1 && facs[0].1 == 1;
    if !irreducible {
        return Ok(EndDescription::Unclassified {
            reason: "reducible characteristic polynomial in dimension >= 3".into(),
        });
    }
    let k = NumberField::new(inv.h.clone())?;
    let coprime_tp = inv
        .p_prime
        .iter()
        .any(|p| inv.t[p].gcd(&n) == 1);
    if monogenic_known(&k, &inv.det, assert_monogenic) && coprime_tp {
        Ok(EndDescription::MonogenicIrr {
            poly: format!("{:?}", inv.h),
            statement: "image of the eigenvalue embedding is Z[lambda^(+-1)], \
                        the full ring of S_lambda-integers"
                .into(),
        })
    } else {
        Ok(EndDescription::IrrGeneral {
            poly: format!("{:?}", inv.h),
            statement: "Z[lambda^(+-1)] <= image <= S_lambda-integers, finitely generated".into(),
        })
    }
}

pub fn is_automorphism(a: &IntMatrix, t: &RatMatrix, precision_override: Option<u32>) -> Decision {
    if t.det().is_zero() {
        return Decision::no(Certificate::Note {
            detail: "singular transform".into(),
        });
    }
    let fwd = is_endomorphism(a, t, precision_override);
    if !fwd.is_yes() {
        return fwd;
    }
    let tinv = t.inverse().expect("nonsingular");
    let bwd = is_endomorphism(a, &tinv, precision_override);
    if !bwd.is_yes() {
        return bwd;
    }
    let mut transcripts = Vec::new();
    for d in [fwd, bwd] {
        if let Certificate::LocalChecks { transcripts: ts } = d.certificate {
            transcripts.extend(ts);
        }
    }
    if transcripts.is_empty() {
        Decision::yes(Certificate::Note {
            detail: "both directions verified".into(),
        })
    } else {
        Decision::yes(Certificate::LocalChecks { transcripts })
    }
}
