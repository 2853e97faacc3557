use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decision::{Certificate, Decision};
use crate::endo::{invariants, iota, is_endomorphism};
use crate::error::Error;
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::primes::{factorize, prime_divisors};
use crate::nf::{
    archimedean_abs, is_root_of_unity, log_rational, split_prime, valuation, NfElement,
    NumberField, PrimeIdealData,
};

pub const K_MAX: u32 = 8;

/// Eigen data of an irreducible defining matrix: the eigenvalue lambda, a
/// primitive integral eigenvector u of A, the dual eigenvector w of A^t with
/// w.u = 1, and the primes S_lambda dividing lambda.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub field: NumberField,
    pub lambda: NfElement,
    pub u: Vec<NfElement>,
    pub w: Vec<NfElement>,
    pub s_lambda: Vec<PrimeIdealData>,
}

/// One kernel vector of a square matrix over K with nullity >= 1.
fn kernel_vector(mut m: Vec<Vec<NfElement>>, k: &NumberField) -> Result<Vec<NfElement>, Error> {
    let n = m.len();
    let mut pivot_col = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        let mut piv = None;
        for r in row..n {
            if !m[r][col].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        let inv = m[row][col].inverse()?;
        for c in col..n {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..n {
                    let s = m[row][c].mul(&f);
                    m[r][c] = m[r][c].sub(&s);
                }
            }
        }
        pivot_col[col] = Some(row);
        row += 1;
        if row == n {
            break;
        }
    }
    let free = (0..n)
        .find(|&c| pivot_col[c].is_none())
        .ok_or(Error::Singular)?;
    let mut v: Vec<NfElement> = vec![k.zero(); n];
    v[free] = k.one();
    for c in 0..n {
        if let Some(r) = pivot_col[c] {
            v[c] = m[r][free].neg();
        }
    }
    Ok(v)
}

fn shifted_matrix(a: &RatMatrix, k: &NumberField) -> Vec<Vec<NfElement>> {
    let n = a.dim();
    let lam = k.gen();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = k.from_rational(&a[(i, j)]);
                    if i == j {
                        e.sub(&lam)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect()
}

pub fn eigen_data(a: &IntMatrix) -> Result<EigenData, Error> {
    let inv = invariants(a)?;
    let k = NumberField::new(inv.h.clone())?;
    let lam = k.gen();
    let ar = a.to_rat();
    // u: kernel of (A - lambda I), normalized by its first nonzero entry
    // (kernel is one-dimensional over K), then cleared to primitive
    // Z[lambda] coordinates
    let mut u = kernel_vector(shifted_matrix(&ar, &k), &k)?;
    let lead = u
        .iter()
        .find(|e| !e.is_zero())
        .ok_or(Error::Singular)?
        .inverse()?;
    for e in &mut u {
        *e = e.mul(&lead);
    }
    let mut den = BigInt::one();
    for e in &u {
        den = den.lcm(&e.denominator());
    }
    let scale = BigRational::from_integer(den);
    let mut content = BigInt::zero();
    for e in &mut u {
        *e = e.scale(&scale);
        for c in e.coords() {
            content = content.gcd(c.numer());
        }
    }
    if !content.is_zero() && !content.is_one() {
        let inv_c = BigRational::new(BigInt::one(), content);
        for e in &mut u {
            *e = e.scale(&inv_c);
        }
    }
    // w: kernel of (A^t - lambda I), scaled so w.u = 1
    let at = a.transpose().to_rat();
    let mut w = kernel_vector(shifted_matrix(&at, &k), &k)?;
    let mut dot = k.zero();
    for i in 0..u.len() {
        dot = dot.add(&w[i].mul(&u[i]));
    }
    let dot_inv = dot.inverse().map_err(|_| Error::Singular)?;
    for e in &mut w {
        *e = e.mul(&dot_inv);
    }
    // S_lambda: primes over det A at which lambda is positive-valued
    let mut s_lambda = Vec::new();
    for p in &inv.p {
        for pr in split_prime(&k, p)? {
            if valuation(&lam, &pr)? > 0 {
                s_lambda.push(pr);
            }
        }
    }
    // the lambda-ideal is supported on S_lambda with the full norm
    let mut prod = BigInt::one();
    for pr in &s_lambda {
        let v = valuation(&lam, pr)?;
        prod *= pr.norm().pow(v as u32);
    }
    if prod != inv.det.abs() {
        return Err(Error::Precision(
            "prime support of lambda does not carry the full determinant".into(),
        ));
    }
    Ok(EigenData {
        field: k,
        lambda: lam,
        u,
        w,
        s_lambda,
    })
}

/// The lambda-coordinate of x in the eigenbasis: w.x as an element of K.
pub fn mu_project(ed: &EigenData, x: &[BigRational]) -> NfElement {
    let mut acc = ed.field.zero();
    for (wi, xi) in ed.w.iter().zip(x) {
        acc = acc.add(&wi.scale(xi));
    }
    acc
}

/// Reconstruction by conjugate sums: x_j = Tr(x1 * u_j).
pub fn mu_lift(ed: &EigenData, x1: &NfElement) -> Vec<BigRational> {
    ed.u.iter().map(|uj| x1.mul(uj).trace()).collect()
}

/// G_A is dense in R^n iff no irreducible factor of h has unit constant term.
pub fn is_dense(a: &IntMatrix) -> Result<bool, Error> {
    let inv = invariants(a)?;
    let facs = crate::exact::factor::factor_over_z(&inv.h);
    Ok(facs.iter().all(|(g, _)| !g.coeff(0).abs().is_one()))
}

/// Ergodicity of the dual endomorphism: the eigenvalues of T are the
/// conjugates of xi = iota(T), so one root-of-unity test decides.
pub fn is_ergodic(a: &IntMatrix, t: &RatMatrix) -> Decision {
    if t.dim() > 0 && (0..t.dim()).all(|i| (0..t.dim()).all(|j| t[(i, j)].is_zero())) {
        return Decision::no(Certificate::Note {
            detail: "zero transform".into(),
        });
    }
    let inv = match invariants(a) {
        Ok(i) => i,
        Err(e) => return Decision::inconclusive(format!("{e}")),
    };
    let facs = crate::exact::factor::factor_over_z(&inv.h);
    if facs.len() != 1 || facs[0].1 != 1 {
        return Decision::inconclusive("reducible characteristic polynomial");
    }
    let membership = is_endomorphism(a, t, None);
    if !membership.is_yes() {
        return Decision::inconclusive("transform not certified as an endomorphism");
    }
    let xi = match iota(a, t) {
        Ok(x) => x,
        Err(e) => return Decision::inconclusive(format!("{e}")),
    };
    if xi.is_zero() {
        return Decision::no(Certificate::Note {
            detail: "xi = 0".into(),
        });
    }
    if is_root_of_unity(&xi) {
        return Decision::no(Certificate::Note {
            detail: "xi is a root of unity".into(),
        });
    }
    Decision::yes(Certificate::Note {
        detail: "xi is nonzero and not a root of unity".into(),
    })
}

fn xi_of(a: &IntMatrix, t: &RatMatrix) -> Result<NfElement, Error> {
    let d = is_ergodic(a, t);
    if !d.is_yes() {
        return Err(Error::Input(format!(
            "ergodicity required for periodic-point counts: {:?}",
            d.certificate
        )));
    }
    iota(a, t)
}

/// |F_k| by the norm route: |N(xi^k - 1)| * prod_{P in S_lambda} N(P)^{-v_P}.
fn count_norm_route(ed: &EigenData, y: &NfElement) -> Result<BigRational, Error> {
    let mut acc = y.norm().abs();
    for pr in &ed.s_lambda {
        let v = valuation(y, pr)?;
        let npv = BigRational::from_integer(pr.norm()).pow(v as i32);
        acc /= npv;
    }
    Ok(acc)
}

/// |F_k| by full factorization: prod over finite primes outside S_lambda of
/// N(P)^{v_P(y)}, using the rational primes under the norm of y.
fn count_factored_route(ed: &EigenData, y: &NfElement) -> Result<BigRational, Error> {
    let nrm = y.norm().abs();
    let mut rational_primes: Vec<BigInt> = prime_divisors(nrm.numer());
    for p in factorize(nrm.denom()).into_keys() {
        if !rational_primes.contains(&p) {
            rational_primes.push(p);
        }
    }
    let mut acc = BigRational::one();
    for p in rational_primes {
        for pr in split_prime(&ed.field, &p)? {
            if ed
                .s_lambda
                .iter()
                .any(|q| q.p == pr.p && q.gen_poly == pr.gen_poly)
            {
                continue;
            }
            let v = valuation(y, &pr)?;
            if v != 0 {
                acc *= BigRational::from_integer(pr.norm()).pow(v as i32);
            }
        }
    }
    Ok(acc)
}

/// Exact periodic-point count |F_k(T)| of the dual solenoid endomorphism.
pub fn periodic_points(a: &IntMatrix, t: &RatMatrix, k: u32) -> Result<BigInt, Error> {
    if k == 0 {
        return Err(Error::Input("period must be positive".into()));
    }
    let ed = eigen_data(a)?;
    let xi = xi_of(a, t)?;
    let y = xi.pow(k as i64)?.sub(&ed.field.one());
    let c1 = count_norm_route(&ed, &y)?;
    let c2 = count_factored_route(&ed, &y)?;
    if c1 != c2 {
        return Err(Error::Precision(format!(
            "periodic-point routes disagree: {c1} vs {c2}"
        )));
    }
    if !c1.is_integer() || !c1.is_positive() {
        return Err(Error::Precision(format!(
            "periodic-point assembly is not a positive integer: {c1}"
        )));
    }
    Ok(c1.to_integer())
}

#[derive(Clone, Debug)]
pub struct EntropyReport {
    pub value: f64,
    pub archimedean: f64,
    pub finite: f64,
    pub empirical: Vec<(u32, f64)>,
}

/// Topological entropy h = sum over S_lambda and the archimedean places of
/// max(0, log|xi|_P), plus the empirical growth sequence (1/k) log|F_k|.
pub fn entropy(a: &IntMatrix, t: &RatMatrix, precision_bits: u32) -> Result<EntropyReport, Error> {
    let ed = eigen_data(a)?;
    let xi = xi_of(a, t)?;
    let mut finite = 0.0;
    for pr in &ed.s_lambda {
        let v = valuation(&xi, pr)?;
        if v < 0 {
            let np = BigRational::from_integer(pr.norm());
            finite += (-v) as f64 * log_rational(&np);
        }
    }
    let mut archimedean = 0.0;
    for place in archimedean_abs(&xi, precision_bits)? {
        let l = log_rational(&place);
        if l > 0.0 {
            archimedean += l;
        }
    }
    let mut empirical = Vec::new();
    for k in 1..=K_MAX {
        let fk = periodic_points(a, t, k)?;
        let lf = log_rational(&BigRational::from_integer(fk));
        empirical.push((k, lf / k as f64));
    }
    Ok(EntropyReport {
        value: archimedean + finite,
        archimedean,
        finite,
        empirical,
    })
}

/// Bounded membership spot check: some k <= bound with A^k x integral.
pub fn bounded_in_ga(a: &IntMatrix, x: &[BigRational], bound: u32) -> Option<u32> {
    let ar = a.to_rat();
    let mut cur = x.to_vec();
    for k in 0..=bound {
        if cur.iter().all(|c| c.is_integer()) {
            return Some(k);
        }
        cur = ar.mul_vec(&cur);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use rand::{Rng, SeedableRng};

    fn cubic() -> IntMatrix {
        // h = x^3 - x^2 + 2x - 6, det 6
        IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![6, -2, 1]]).unwrap()
    }

    fn cubic_t() -> RatMatrix {
        // T = (2I + A - A^2) A^-3
        let a = cubic();
        let ar = a.to_rat();
        let num = IntMatrix::identity(3)
            .to_rat()
            .scale(&BigRational::from_i64(2).unwrap())
            .add(&ar)
            .sub(&ar.mul(&ar));
        num.mul(&ar.inverse().unwrap().pow_int(3).unwrap())
    }

    #[test]
    fn eigen_data_cubic() {
        let a = cubic();
        let ed = eigen_data(&a).unwrap();
        let lam = ed.field.gen();
        // companion form: u = (1, lambda, lambda^2)
        assert_eq!(ed.u[0], ed.field.one());
        assert_eq!(ed.u[1], lam);
        assert_eq!(ed.u[2], lam.mul(&lam));
        // A u = lambda u
        let n = 3;
        for i in 0..n {
            let mut acc = ed.field.zero();
            for j in 0..n {
                acc = acc.add(
                    &ed.u[j].scale(&BigRational::from_integer(a[(i, j)].clone())),
                );
            }
            assert_eq!(acc, lam.mul(&ed.u[i]));
        }
        // w.u = 1
        let mut dot = ed.field.zero();
        for i in 0..n {
            dot = dot.add(&ed.w[i].mul(&ed.u[i]));
        }
        assert_eq!(dot, ed.field.one());
        // S_lambda has two primes with norms multiplying to 6
        assert_eq!(ed.s_lambda.len(), 2);
        let prod: BigInt = ed.s_lambda.iter().map(|p| p.norm()).product();
        assert_eq!(prod, BigInt::from(6));
    }

    #[test]
    fn mu_round_trip_and_equivariance() {
        let a = cubic();
        let ed = eigen_data(&a).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let coords: Vec<BigRational> = (0..3)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.gen_range(-50i64..=50)),
                        BigInt::from(rng.gen_range(1i64..=6)),
                    )
                })
                .collect();
            let x1 = ed.field.from_coords(coords).unwrap();
            let lifted = mu_lift(&ed, &x1);
            assert_eq!(mu_project(&ed, &lifted), x1, "round trip");
        }
        for _ in 0..20 {
            let x: Vec<BigRational> = (0..3)
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9))))
                .collect();
            let ax = a.to_rat().mul_vec(&x);
            assert_eq!(
                mu_project(&ed, &ax),
                ed.lambda.mul(&mu_project(&ed, &x)),
                "equivariance"
            );
        }
    }

    #[test]
    fn mu_lift_lambda_inverse() {
        let a = cubic();
        let ed = eigen_data(&a).unwrap();
        let x1 = ed.lambda.inverse().unwrap();
        let x = mu_lift(&ed, &x1);
        for c in &x {
            for (p, _) in factorize(c.denom()) {
                assert!(p == BigInt::from(2) || p == BigInt::from(3));
            }
        }
        assert!(bounded_in_ga(&a, &x, 4).is_some());
    }

    #[test]
    fn density() {
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![-13, 1]]).unwrap();
        assert!(is_dense(&b).unwrap());
        // (x-1)(x-6) companion: not dense
        let c = IntMatrix::from_rows(&[vec![0, 1], vec![-6, 7]]).unwrap();
        assert!(!is_dense(&c).unwrap());
        assert!(!is_dense(&IntMatrix::identity(3)).unwrap());
    }

    #[test]
    fn ergodicity() {
        let a = cubic();
        assert!(is_ergodic(&a, &IntMatrix::identity(3).to_rat()).is_no());
        assert!(is_ergodic(&a, &IntMatrix::identity(3).to_rat().scale(
            &BigRational::from_i64(-1).unwrap()
        ))
        .is_no());
        assert!(is_ergodic(&a, &cubic_t()).is_yes());
        assert!(is_ergodic(&a, &a.to_rat()).is_yes());
    }

    #[test]
    fn periodic_point_counts() {
        let a = cubic();
        let t = cubic_t();
        assert_eq!(periodic_points(&a, &t, 1).unwrap(), BigInt::from(169));
        assert_eq!(periodic_points(&a, &t, 2).unwrap(), BigInt::from(38701));
    }

    #[test]
    fn sigma_iterate_consistency() {
        let a = cubic();
        let a2 = a.to_rat().mul(&a.to_rat());
        for k in 1..=3u32 {
            assert_eq!(
                periodic_points(&a, &a2, k).unwrap(),
                periodic_points(&a, &a.to_rat(), 2 * k).unwrap()
            );
        }
    }

    #[test]
    fn entropy_matches_growth() {
        let a = cubic();
        let t = cubic_t();
        let rep = entropy(&a, &t, 128).unwrap();
        let (_, g8) = rep.empirical.last().copied().unwrap();
        let tol = 0.05 * rep.value.max(1.0);
        assert!(
            (g8 - rep.value).abs() <= tol,
            "entropy {} vs growth {}",
            rep.value,
            g8
        );
    }

    #[test]
    fn entropy_of_a_itself() {
        // xi = lambda: integral at S_lambda, so entropy is purely archimedean
        // and equals log|det| minus the contracting contribution bookkeeping:
        // here all |sigma(lambda)| > 1, so h = log 6.
        let a = cubic();
        let rep = entropy(&a, &a.to_rat(), 128).unwrap();
        assert_eq!(rep.finite, 0.0);
        assert!((rep.value - 6.0f64.ln()).abs() < 1e-9);
    }
}
