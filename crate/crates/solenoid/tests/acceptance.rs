//! End-to-end acceptance suite. Each test prints one pass/fail line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solenoid::decision::Verdict;
use solenoid::dynamics;
use solenoid::endo;
use solenoid::exact::matrix::{IntMatrix, RatMatrix};
use solenoid::exact::poly::IntPoly;
use solenoid::exact::{hnf, lattice_hnf};
use solenoid::nf::{split_prime, valuation, NumberField};
use solenoid::odometer;
use solenoid::padic;

fn report(n: u32, name: &str, ok: bool) {
    println!("criterion {n} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed");
}

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

fn companion(h: &IntPoly) -> IntMatrix {
    let n = h.degree();
    let mut a = IntMatrix::zero(n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = BigInt::one();
    }
    for j in 0..n {
        a[(n - 1, j)] = -h.coeff(j);
    }
    a
}

fn cubic_fixture() -> (IntMatrix, RatMatrix) {
    let a = companion(&IntPoly::from_i64(&[-6, 2, -1, 1]));
    let ar = a.to_rat();
    let num = IntMatrix::identity(3)
        .to_rat()
        .scale(&BigRational::from_integer(BigInt::from(2)))
        .add(&ar)
        .sub(&ar.mul(&ar));
    let t = num.mul(&ar.inverse().unwrap().pow_int(3).unwrap());
    (a, t)
}

#[test]
fn criterion_1_cubic_periodic_points() {
    let (a, t) = cubic_fixture();
    let f1 = dynamics::periodic_points(&a, &t, 1).unwrap();
    let f2 = dynamics::periodic_points(&a, &t, 2).unwrap();
    report(
        1,
        "cubic periodic-point counts",
        f1 == BigInt::from(169) && f2 == BigInt::from(38701),
    );
}

#[test]
fn criterion_2_quartic_example() {
    let a = m(&[
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![-5, 20, -21, 2],
    ]);
    let l = m(&[
        vec![1, 0, 0, 0],
        vec![40, -81, 6, -4],
        vec![20, -80, 5, -4],
        vec![-770, 1520, -114, 75],
    ]);
    let inv = endo::invariants(&a).unwrap();
    let mut ok = inv.det.abs() == BigInt::from(5)
        && inv.p == vec![BigInt::from(5)]
        && inv.p_prime == vec![BigInt::from(5)]
        && inv.t[&BigInt::from(5)] == 2;
    ok &= odometer::in_linear_rep_group(&a, &l).is_yes();
    ok &= a.mul(&l) != l.mul(&a);
    let err = endo::iota(&a, &l.to_rat());
    ok &= matches!(&err, Err(e) if e.to_string().contains("not in the commutant"));
    report(2, "quartic invariants and odometer membership", ok);
}

#[test]
fn criterion_3_quadratic_alpha() {
    let a = m(&[vec![0, 1], vec![-13, 1]]);
    let b = m(&[vec![-1, 3], vec![-5, 2]]);
    let mut ok = true;
    for x in [&a, &b] {
        let (alpha, desc) = endo::alpha_generator(x).unwrap();
        ok &= alpha.is_one();
        ok &= matches!(desc, endo::EndDescription::QuadraticIrr { generators, .. }
            if generators.contains("{1, 1*omega}"));
    }
    let c = m(&[vec![-1, 3], vec![3, 2]]);
    let inv = endo::invariants(&c).unwrap();
    let k = NumberField::new(inv.h.clone()).unwrap();
    let fi = solenoid::nf::field_index(&k, &inv.det, false).unwrap();
    ok &= fi.m == BigInt::from(3);
    let (alpha, _) = endo::alpha_generator(&c).unwrap();
    ok &= alpha.is_one();
    report(3, "quadratic alpha generators and field index", ok);
}

fn random_supported_rat(rng: &mut ChaCha8Rng) -> BigRational {
    let num = BigInt::from(rng.gen_range(-20i64..=20));
    let dens = [1i64, 2, 3, 4, 6, 8, 9, 12, 18, 24, 36];
    BigRational::new(num, BigInt::from(dens[rng.gen_range(0..dens.len())]))
}

#[test]
fn criterion_4_closed_form_vs_padic() {
    let fixtures = [m(&[vec![2, 1], vec![0, 3]]), m(&[vec![6, 0], vec![0, 2]])];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut agree = 0usize;
    let mut total = 0usize;
    for a in &fixtures {
        let inv = endo::invariants(a).unwrap();
        for _ in 0..100 {
            let mut t = RatMatrix::zero(2);
            for i in 0..2 {
                for j in 0..2 {
                    t[(i, j)] = random_supported_rat(&mut rng);
                }
            }
            let closed = endo::closed_form_membership(a, &t)
                .unwrap()
                .expect("fixtures are classified");
            let mut local = Some(true);
            for p in &inv.p_prime {
                match padic::local_end_check(a, &t, p, None).verdict {
                    Verdict::Yes => {}
                    Verdict::No => {
                        local = Some(false);
                        break;
                    }
                    Verdict::Inconclusive => {
                        local = None;
                        break;
                    }
                }
            }
            total += 1;
            if local == Some(closed) {
                agree += 1;
            }
        }
    }
    println!("  agreement {agree}/{total}");
    report(4, "2-D closed forms vs local checks", total >= 200 && agree == total);
}

fn random_nonsingular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    loop {
        let mut a = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = BigInt::from(rng.gen_range(-5i64..=5));
            }
        }
        if !a.det().is_zero() {
            return a;
        }
    }
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    for iter in 0..200 {
        let n = if iter % 2 == 0 { 2 } else { 3 };
        let a = random_nonsingular(&mut rng, n);
        let inv = endo::invariants(&a).unwrap();
        // T in Z[A, A^-1]: sum of c_i A^i for i in -2..=2
        let ar = a.to_rat();
        let mut t = RatMatrix::zero(n);
        for i in -2i64..=2 {
            let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            t = t.add(&ar.pow_int(i).unwrap().scale(&c));
        }
        let corrupt = rng.gen_bool(0.5);
        if corrupt {
            // add 1/q at a random entry, q prime outside the support
            let q = [2i64, 3, 5, 7, 11, 13]
                .into_iter()
                .map(BigInt::from)
                .find(|q| !inv.p.contains(q))
                .unwrap();
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            t[(i, j)] += BigRational::new(BigInt::one(), q);
        }
        let oracle = endo::bounded_oracle(&a, &t, 6, 12);
        let membership = endo::is_endomorphism(&a, &t, None);
        assert_ne!(
            membership.verdict,
            Verdict::Inconclusive,
            "membership inconclusive for A={a:?} T={t:?}"
        );
        if corrupt {
            assert!(oracle.is_no(), "corrupted T should fail the support test");
            assert!(membership.is_no());
            checked += 1;
        } else {
            assert_eq!(
                endo::oracle_positive(&oracle),
                Some(true),
                "witnesses must exist for T in Z[A, A^-1]: A={a:?} T={t:?}"
            );
            assert!(membership.is_yes(), "A={a:?} T={t:?}");
            checked += 1;
        }
    }
    report(5, "bounded oracle vs decision procedure", checked == 200);
}

#[test]
fn criterion_6_number_theory_suite() {
    let polys: Vec<IntPoly> = [
        vec![13, -1, 1],
        vec![-1, -1, 1],
        vec![-3, 0, 1],
        vec![1, 0, 1],
        vec![-2, 0, 1],
        vec![-6, 2, -1, 1],
        vec![-2, 0, 0, 1],
        vec![1, 1, 0, 1],
        vec![-1, -1, 0, 1],
        vec![5, -20, 21, -2, 1],
    ]
    .into_iter()
    .map(|c| IntPoly::new(c.into_iter().map(BigInt::from).collect()))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ok = true;
    for h in &polys {
        let k = NumberField::new(h.clone()).unwrap();
        let n = k.degree();
        // sum of e_i f_i = n at a spread of primes
        for p in [2i64, 3, 5, 7, 11, 13, 17] {
            let prs = split_prime(&k, &BigInt::from(p)).unwrap();
            let sum: usize = prs.iter().map(|q| (q.e * q.f) as usize).sum();
            if sum != n {
                println!("  ef-sum failure: h={h:?} p={p} sum={sum}");
                ok = false;
            }
        }
        // product formula over the primes under the norm
        for _ in 0..50 {
            let coords: Vec<BigRational> = (0..n)
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9))))
                .collect();
            let x = match k.from_coords(coords) {
                Ok(x) if !x.is_zero() => x,
                _ => continue,
            };
            let nx = x.norm().to_integer().abs();
            let mut prod = BigRational::one();
            for p in solenoid::exact::primes::prime_divisors(&nx) {
                for pr in split_prime(&k, &p).unwrap() {
                    let v = valuation(&x, &pr).unwrap();
                    prod *= BigRational::from_integer(pr.norm()).pow(v as i32);
                }
            }
            if prod != BigRational::from_integer(nx.clone()) {
                println!("  product-formula failure: h={h:?} x={x:?} prod={prod} norm={nx}");
                ok = false;
            }
        }
    }
    // Cayley-Hamilton for a spread of matrices
    for a in [
        m(&[vec![2, 1], vec![0, 3]]),
        m(&[vec![6, 0], vec![0, 2]]),
        m(&[vec![0, 1], vec![-13, 1]]),
        companion(&IntPoly::from_i64(&[-6, 2, -1, 1])),
        companion(&IntPoly::from_i64(&[5, -20, 21, -2, 1])),
        random_nonsingular(&mut rng, 3),
        random_nonsingular(&mut rng, 4),
    ] {
        if !a.char_poly().eval_matrix(&a).is_zero() {
            println!("  cayley-hamilton failure: {a:?}");
            ok = false;
        }
    }
    // HNF idempotence on random full-rank lattices
    for _ in 0..20 {
        let g = random_nonsingular(&mut rng, 3);
        let cols: Vec<Vec<BigInt>> = (0..3)
            .map(|j| (0..3).map(|i| g[(i, j)].clone()).collect())
            .collect();
        let h1 = lattice_hnf(3, &cols).unwrap();
        let cols2: Vec<Vec<BigInt>> = (0..3)
            .map(|j| (0..3).map(|i| h1[(i, j)].clone()).collect())
            .collect();
        let h2 = lattice_hnf(3, &cols2).unwrap();
        if h1 != h2 {
            println!("  lattice-hnf idempotence failure: {g:?}");
            ok = false;
        }
        let hr = hnf(&g, true).unwrap();
        let hr2 = hnf(&hr.h, true).unwrap();
        if hr.h != hr2.h {
            println!("  hnf idempotence failure: {g:?} -> {:?} -> {:?}", hr.h, hr2.h);
            ok = false;
        }
    }
    report(6, "number-theory invariant suite", ok);
}

#[test]
fn criterion_7_entropy_growth() {
    let (a, t) = cubic_fixture();
    let rep = dynamics::entropy(&a, &t, 128).unwrap();
    let (_, g8) = *rep.empirical.last().unwrap();
    let ok = (g8 - rep.value).abs() <= 0.05 * rep.value.max(1.0);
    println!("  entropy {} vs (1/8) log|F_8| = {}", rep.value, g8);
    report(7, "growth rate vs entropy", ok);
}

#[test]
fn criterion_8_structural_tags() {
    use endo::EndDescription as E;
    use odometer::LinRepDescription as L;
    let mut ok = true;
    let uni = m(&[vec![0, -1], vec![1, 1]]);
    ok &= endo::end_ring_description(&uni, false).unwrap() == E::AllInteger;
    ok &= odometer::linear_rep_group_description(&uni).unwrap() == L::FullGl;
    let two_i = m(&[vec![2, 0], vec![0, 2]]);
    ok &= matches!(endo::end_ring_description(&two_i, false).unwrap(), E::AllR { .. });
    ok &= matches!(
        odometer::linear_rep_group_description(&m(&[vec![6, 0], vec![0, 2]])).unwrap(),
        L::LowerTriangularGl2
    );
    ok &= matches!(
        odometer::linear_rep_group_description(&m(&[vec![2, 1], vec![0, 3]])).unwrap(),
        L::KleinFour { .. }
    );
    report(8, "structural description tags", ok);
}
