use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decision::{Certificate, Decision};
use crate::endo::{classify2d, invariants, is_endomorphism, Classify2d};
use crate::error::Error;
use crate::exact::matrix::IntMatrix;
use crate::nf::NumberField;

/// Structural description of the linear representation group N(X_A) of the
/// constant-base Z^n-odometer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum LinRepDescription {
    FullGl,
    KleinFour { diagonalizer_det: String },
    PlusMinusIdentity,
    LowerTriangularGl2,
    CentralizerInGl { poly: String, statement: String },
    MembershipOnly { reason: String },
}

/// T lies in N(X_A) iff T is unimodular and T^t is an endomorphism of the
/// transposed system.
pub fn in_linear_rep_group(a: &IntMatrix, t: &IntMatrix) -> Decision {
    if !t.det().abs().is_one() {
        return Decision::no(Certificate::Note {
            detail: format!("det T = {} is not a unit", t.det()),
        });
    }
    is_endomorphism(&a.transpose(), &t.transpose().to_rat(), None)
}

fn primitive_eigenvectors_2x2(a: &IntMatrix) -> Option<(Vec<BigInt>, Vec<BigInt>, BigInt, BigInt)> {
    // integer eigenvalues of a 2x2 with reducible characteristic polynomial
    let h = a.char_poly();
    let facs = crate::exact::factor::factor_over_z(&h);
    let mut roots: Vec<BigInt> = facs
        .iter()
        .flat_map(|(g, m)| {
            if g.degree() == 1 {
                vec![-g.coeff(0); *m as usize]
            } else {
                vec![]
            }
        })
        .collect();
    if roots.len() != 2 || roots[0] == roots[1] {
        return None;
    }
    roots.sort();
    let ev = |lambda: &BigInt| -> Vec<BigInt> {
        let m00 = &a[(0, 0)] - lambda;
        let m01 = a[(0, 1)].clone();
        let m10 = a[(1, 0)].clone();
        let m11 = &a[(1, 1)] - lambda;
        let (x, y) = if !m00.is_zero() || !m01.is_zero() {
            (m01, -m00)
        } else {
            (m11, -m10)
        };
        let g = x.gcd(&y);
        if g.is_zero() {
            vec![BigInt::one(), BigInt::zero()]
        } else {
            vec![x / &g, y / &g]
        }
    };
    let v1 = ev(&roots[0]);
    let v2 = ev(&roots[1]);
    Some((v1, v2, roots[0].clone(), roots[1].clone()))
}

/// Klein-four test: some integral matrix of primitive eigenvectors of A^t
/// (either column order) has determinant dividing 2.
fn klein_four_diagonalizer(a: &IntMatrix) -> Option<BigInt> {
    let at = a.transpose();
    let (v1, v2, _, _) = primitive_eigenvectors_2x2(&at)?;
    let det = |c1: &[BigInt], c2: &[BigInt]| -> BigInt {
        &c1[0] * &c2[1] - &c1[1] * &c2[0]
    };
    for (c1, c2) in [(&v1, &v2), (&v2, &v1)] {
        let d = det(c1, c2);
        if !d.is_zero() && BigInt::from(2).is_multiple_of(&d.abs()) {
            return Some(d);
        }
    }
    None
}

pub fn linear_rep_group_description(a: &IntMatrix) -> Result<LinRepDescription, Error> {
    let inv = invariants(a)?;
    if inv.p.is_empty() || inv.p_prime.is_empty() {
        return Ok(LinRepDescription::FullGl);
    }
    let n = a.dim();
    let facs = crate::exact::factor::factor_over_z(&inv.h);
    let irreducible = facs.len() == 1 && facs[0].1 == 1;
    if n == 2 {
        if irreducible {
            let k = NumberField::new(inv.h.clone())?;
            let finite = k.disc().is_negative();
            return Ok(LinRepDescription::CentralizerInGl {
                poly: format!("{:?}", inv.h),
                statement: if finite {
                    "centralizer of A in GL_2(Z), embedded in the unit group of an \
                     imaginary quadratic order: finite"
                        .into()
                } else {
                    "centralizer of A in GL_2(Z), embedded in the unit group of a \
                     real quadratic order"
                        .into()
                },
            });
        }
        return Ok(match classify2d(a)? {
            Classify2d::CaseB(_) => match klein_four_diagonalizer(a) {
                Some(d) => LinRepDescription::KleinFour {
                    diagonalizer_det: d.to_string(),
                },
                None => LinRepDescription::PlusMinusIdentity,
            },
            Classify2d::CaseC(_) => LinRepDescription::LowerTriangularGl2,
            _ => unreachable!("easy cases handled above"),
        });
    }
    if irreducible {
        let coprime = inv.p_prime.iter().any(|p| inv.t[p].gcd(&n) == 1);
        if coprime {
            return Ok(LinRepDescription::CentralizerInGl {
                poly: format!("{:?}", inv.h),
                statement: "centralizer of A in GL_n(Z), embedded in the unit group \
                            of an order of the eigenvalue field"
                    .into(),
            });
        }
    }
    Ok(LinRepDescription::MembershipOnly {
        reason: "generators out of scope; membership decidable".into(),
    })
}

/// T = sum_i a_i A^i from unit coordinates of xi = sum_i a_i lambda^i;
/// requires N(xi) = +-1 so that T is unimodular.
pub fn unit_to_matrix(a: &IntMatrix, unit_coords: &[BigInt]) -> Result<IntMatrix, Error> {
    let inv = invariants(a)?;
    let n = a.dim();
    if unit_coords.len() > n {
        return Err(Error::Input(format!(
            "expected at most {n} coordinates, got {}",
            unit_coords.len()
        )));
    }
    let k = NumberField::new(inv.h)?; // errors if reducible
    let coords: Vec<num_rational::BigRational> = (0..n)
        .map(|i| {
            num_rational::BigRational::from_integer(
                unit_coords.get(i).cloned().unwrap_or_else(BigInt::zero),
            )
        })
        .collect();
    let xi = k.from_coords(coords)?;
    let nrm = xi.norm();
    if !nrm.is_integer() || !nrm.to_integer().abs().is_one() {
        return Err(Error::Input(format!("coordinates define a non-unit: norm {nrm}")));
    }
    let mut t = IntMatrix::zero(n);
    let mut pw = IntMatrix::identity(n);
    for c in unit_coords {
        t = t.add(&pw.scale(c));
        pw = pw.mul(a);
    }
    debug_assert_eq!(t.det(), nrm.to_integer());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{bounded_oracle, oracle_positive};
    use crate::exact::poly::IntPoly;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn quartic_a() -> IntMatrix {
        m(&[
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![-5, 20, -21, 2],
        ])
    }

    fn quartic_l() -> IntMatrix {
        m(&[
            vec![1, 0, 0, 0],
            vec![40, -81, 6, -4],
            vec![20, -80, 5, -4],
            vec![-770, 1520, -114, 75],
        ])
    }

    #[test]
    fn minus_identity_everywhere() {
        for a in [
            quartic_a(),
            m(&[vec![2, 1], vec![0, 3]]),
            m(&[vec![6, 0], vec![0, 2]]),
        ] {
            let neg = IntMatrix::identity(a.dim()).scale(&BigInt::from(-1));
            assert!(in_linear_rep_group(&a, &neg).is_yes());
        }
    }

    #[test]
    fn quartic_l_membership() {
        let a = quartic_a();
        let l = quartic_l();
        assert!(l.det().abs().is_one());
        // non-commutativity witness
        assert_ne!(a.mul(&l), l.mul(&a));
        let d = in_linear_rep_group(&a, &l);
        assert!(d.is_yes(), "{d:?}");
        // defining-property witness search on the transposed system
        let o = bounded_oracle(&a.transpose(), &l.transpose().to_rat(), 6, 12);
        assert_eq!(oracle_positive(&o), Some(true));
    }

    #[test]
    fn det_two_rejected() {
        let a = quartic_a();
        let t = IntMatrix::identity(4).scale(&BigInt::from(2));
        let mut t = t;
        t[(0, 0)] = BigInt::one();
        t[(1, 1)] = BigInt::one();
        t[(2, 2)] = BigInt::one();
        assert!(in_linear_rep_group(&a, &t).is_no());
    }

    #[test]
    fn descriptions() {
        assert_eq!(
            linear_rep_group_description(&m(&[vec![0, -1], vec![1, 0]])).unwrap(),
            LinRepDescription::FullGl
        );
        match linear_rep_group_description(&m(&[vec![2, 1], vec![0, 3]])).unwrap() {
            LinRepDescription::KleinFour { diagonalizer_det } => {
                assert_eq!(diagonalizer_det.parse::<i64>().unwrap().abs(), 1);
            }
            d => panic!("expected Klein four, got {d:?}"),
        }
        assert_eq!(
            linear_rep_group_description(&m(&[vec![6, 0], vec![0, 2]])).unwrap(),
            LinRepDescription::LowerTriangularGl2
        );
        match linear_rep_group_description(&m(&[vec![0, 1], vec![-13, 1]])).unwrap() {
            LinRepDescription::CentralizerInGl { statement, .. } => {
                assert!(statement.contains("finite"));
            }
            d => panic!("expected centralizer, got {d:?}"),
        }
    }

    #[test]
    fn unit_matrices() {
        let a = quartic_a();
        assert_eq!(
            unit_to_matrix(&a, &[BigInt::one()]).unwrap(),
            IntMatrix::identity(4)
        );
        assert_eq!(
            unit_to_matrix(&a, &[BigInt::from(-1)]).unwrap(),
            IntMatrix::identity(4).scale(&BigInt::from(-1))
        );
        // companion of x^2 - 3, xi = 2 + lambda, N = 1
        let c = {
            let h = IntPoly::from_i64(&[-3, 0, 1]);
            let mut a = IntMatrix::zero(2);
            a[(0, 1)] = BigInt::one();
            a[(1, 0)] = -h.coeff(0);
            a[(1, 1)] = -h.coeff(1);
            a
        };
        let t = unit_to_matrix(&c, &[BigInt::from(2), BigInt::one()]).unwrap();
        assert_eq!(t, m(&[vec![2, 1], vec![3, 2]]));
        assert!(t.det().is_one());
        assert!(in_linear_rep_group(&c, &t).is_yes());
        // non-unit rejected
        assert!(unit_to_matrix(&c, &[BigInt::from(2)]).is_err());
    }
}
