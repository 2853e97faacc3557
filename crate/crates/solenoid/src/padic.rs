use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::decision::{Certificate, Decision, LocalTranscript};
use crate::error::Error;
use crate::exact::factor::{hensel_split, zero_multiplicity_mod};
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::poly::{mod_inverse, IntPoly};
use crate::exact::primes::valuation;

pub const DEFAULT_SLACK: u32 = 4;

/// Precision bookkeeping for computations in Z/p^N: congruences are reported
/// modulo p^(N - slack).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicContext {
    pub p: BigInt,
    pub n_exp: u32,
    pub slack: u32,
}

impl PadicContext {
    pub fn new(p: BigInt, n_exp: u32) -> Result<Self, Error> {
        let slack = DEFAULT_SLACK;
        if n_exp < slack + 4 {
            return Err(Error::Precision(format!(
                "precision exponent {n_exp} below policy minimum {}",
                slack + 4
            )));
        }
        Ok(PadicContext { p, n_exp, slack })
    }

    pub fn modulus(&self) -> BigInt {
        self.p.pow(self.n_exp)
    }

    pub fn report_modulus(&self) -> BigInt {
        self.p.pow(self.n_exp - self.slack)
    }
}

/// t_p: multiplicity of zero as a root of h mod p.
pub fn t_multiplicity(h: &IntPoly, p: &BigInt) -> usize {
    zero_multiplicity_mod(h, p)
}

/// Basis of the maximal divisible submodule D_p(A) modulo p^N: a saturated
/// rank-t_p lattice with unit pivots, in reduced column-echelon form.
#[derive(Clone, Debug)]
pub struct DivisiblePart {
    pub ctx: PadicContext,
    pub t_p: usize,
    /// columns (length-n vectors mod p^N), one per basis element
    pub basis: Vec<Vec<BigInt>>,
    /// row index of the unit pivot of each basis column
    pub pivot_rows: Vec<usize>,
}

/// Gauss-Jordan over Z/p^N using only unit pivots, preferring low row indices.
/// Returns (reduced pivot columns, pivot rows). Non-pivot columns must vanish.
fn unit_echelon(
    mut cols: Vec<Vec<BigInt>>,
    p: &BigInt,
    pn: &BigInt,
    check_mod: &BigInt,
) -> Result<(Vec<Vec<BigInt>>, Vec<usize>), Error> {
    let nrows = cols.first().map_or(0, |c| c.len());
    for col in cols.iter_mut() {
        for v in col.iter_mut() {
            *v = v.mod_floor(pn);
        }
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..cols.len()).collect();
    loop {
        // lowest row with a unit entry in some remaining column
        let mut found: Option<(usize, usize)> = None;
        'rows: for r in 0..nrows {
            if pivot_rows.contains(&r) {
                continue;
            }
            for (ri, &c) in remaining.iter().enumerate() {
                if !(&cols[c][r] % p).is_zero() {
                    found = Some((r, ri));
                    break 'rows;
                }
            }
        }
        let (r, ri) = match found {
            Some(x) => x,
            None => break,
        };
        let c = remaining.remove(ri);
        let inv = mod_inverse(&cols[c][r], pn).expect("unit pivot");
        let pivot_col: Vec<BigInt> = cols[c].iter().map(|v| (v * &inv).mod_floor(pn)).collect();
        // eliminate row r from every other column (remaining and prior basis)
        for &oc in &remaining {
            let f = cols[oc][r].clone();
            if f.is_zero() {
                continue;
            }
            for i in 0..nrows {
                cols[oc][i] = (&cols[oc][i] - &f * &pivot_col[i]).mod_floor(pn);
            }
        }
        for b in basis.iter_mut() {
            let f = b[r].clone();
            if f.is_zero() {
                continue;
            }
            for i in 0..nrows {
                b[i] = (&b[i] - &f * &pivot_col[i]).mod_floor(pn);
            }
        }
        basis.push(pivot_col);
        pivot_rows.push(r);
    }
    for &c in &remaining {
        if cols[c].iter().any(|v| !v.mod_floor(check_mod).is_zero()) {
            return Err(Error::Precision(
                "non-pivot column fails to vanish at working precision".into(),
            ));
        }
    }
    Ok((basis, pivot_rows))
}

pub fn divisible_part(a: &IntMatrix, ctx: &PadicContext) -> Result<DivisiblePart, Error> {
    let n = a.dim();
    let h = a.char_poly();
    let t = t_multiplicity(&h, &ctx.p);
    if t == 0 {
        return Ok(DivisiblePart {
            ctx: ctx.clone(),
            t_p: 0,
            basis: vec![],
            pivot_rows: vec![],
        });
    }
    if t == n {
        let id = IntMatrix::identity(n);
        return Ok(DivisiblePart {
            ctx: ctx.clone(),
            t_p: n,
            basis: (0..n)
                .map(|j| (0..n).map(|i| id[(i, j)].clone()).collect())
                .collect(),
            pivot_rows: (0..n).collect(),
        });
    }
    let pn = ctx.modulus();
    let (h1, h2) = hensel_split(&h, &ctx.p, ctx.n_exp);
    // D_p = image of h1(A) = kernel of h2(A) (saturated) over Z_p
    let c = h1.eval_matrix(a).mod_reduce(&pn);
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| c[(i, j)].clone()).collect())
        .collect();
    let (basis, pivot_rows) = unit_echelon(cols, &ctx.p, &pn, &ctx.report_modulus())?;
    if basis.len() != t {
        return Err(Error::Precision(format!(
            "divisible part rank {} != t_p {}",
            basis.len(),
            t
        )));
    }
    let dp = DivisiblePart {
        ctx: ctx.clone(),
        t_p: t,
        basis,
        pivot_rows,
    };
    // invariant checks at reporting precision
    let rm = ctx.report_modulus();
    let h2a = h2.eval_matrix(a).mod_reduce(&pn);
    for col in &dp.basis {
        let image = mat_vec_mod(&h2a, col, &pn);
        if image.iter().any(|v| !v.mod_floor(&rm).is_zero()) {
            return Err(Error::Precision("divisible part not killed by the unit factor".into()));
        }
        let av = mat_vec_mod(a, col, &pn);
        if dp.solve_in_span(&av).is_none() {
            return Err(Error::Precision("divisible part not invariant".into()));
        }
    }
    Ok(dp)
}

fn mat_vec_mod(m: &IntMatrix, v: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for j in 0..n {
                acc += &m[(i, j)] * &v[j];
            }
            acc.mod_floor(modulus)
        })
        .collect()
}

impl DivisiblePart {
    /// Coefficients expressing w in the column span mod p^(N - slack), if any.
    pub fn solve_in_span(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let pn = self.ctx.modulus();
        let rm = self.ctx.report_modulus();
        let mut res: Vec<BigInt> = w.iter().map(|v| v.mod_floor(&pn)).collect();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (b, &r) in self.basis.iter().zip(&self.pivot_rows) {
            let c = res[r].clone();
            if !c.is_zero() {
                for i in 0..res.len() {
                    res[i] = (&res[i] - &c * &b[i]).mod_floor(&pn);
                }
            }
            coeffs.push(c);
        }
        if res.iter().all(|v| v.mod_floor(&rm).is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }
}

/// Characteristic data: after a coordinate permutation placing pivot rows
/// first, the divisible part is spanned by f_i + sum_j alpha[i][j] f_(t+j).
#[derive(Clone, Debug)]
pub struct CharacteristicSet {
    pub ctx: PadicContext,
    pub t_p: usize,
    /// alpha[i][j] mod p^N for basis vector i and non-pivot coordinate j
    pub alpha: Vec<Vec<BigInt>>,
    /// permutation: position k in the reordered basis is original row perm[k]
    pub permutation: Vec<usize>,
}

pub fn characteristic_set(a: &IntMatrix, ctx: &PadicContext) -> Result<CharacteristicSet, Error> {
    let dp = divisible_part(a, ctx)?;
    let n = a.dim();
    let mut permutation = dp.pivot_rows.clone();
    let non_pivot: Vec<usize> = (0..n).filter(|r| !dp.pivot_rows.contains(r)).collect();
    permutation.extend(non_pivot.iter().cloned());
    let alpha = dp
        .basis
        .iter()
        .map(|b| non_pivot.iter().map(|&r| b[r].clone()).collect())
        .collect();
    Ok(CharacteristicSet {
        ctx: ctx.clone(),
        t_p: dp.t_p,
        alpha,
        permutation,
    })
}

/// Largest p-denominator exponent among the entries of T.
pub fn denominator_exponent(t: &RatMatrix, p: &BigInt) -> u32 {
    let n = t.dim();
    let mut a = 0;
    for i in 0..n {
        for j in 0..n {
            let den = t[(i, j)].denom();
            if !den.is_one() {
                a = a.max(valuation(den, p));
            }
        }
    }
    a
}

/// T scaled by p^a and reduced mod p^N (prime-to-p denominators inverted).
fn scaled_int_matrix(t: &RatMatrix, p: &BigInt, a: u32, pn: &BigInt) -> Result<IntMatrix, Error> {
    let n = t.dim();
    let mut out = IntMatrix::zero(n);
    let pa = p.pow(a);
    for i in 0..n {
        for j in 0..n {
            let num = t[(i, j)].numer();
            let den = t[(i, j)].denom();
            let vp = valuation(den, p);
            let unit = den / p.pow(vp);
            let inv = mod_inverse(&unit, pn).ok_or_else(|| {
                Error::Input("denominator not invertible at working precision".into())
            })?;
            debug_assert!(vp <= a);
            let scale = (&pa / p.pow(vp)) * inv;
            out[(i, j)] = (num * scale).mod_floor(pn);
        }
    }
    Ok(out)
}

/// Inverse of an integer matrix mod p^N (determinant must be a p-unit).
fn invert_mod(m: &IntMatrix, p: &BigInt, pn: &BigInt) -> Result<IntMatrix, Error> {
    let n = m.dim();
    let mut a = m.mod_reduce(pn);
    let mut inv = IntMatrix::identity(n);
    for col in 0..n {
        let pr = (col..n)
            .find(|&r| !(&a[(r, col)] % p).is_zero())
            .ok_or_else(|| Error::Precision("matrix not invertible mod p".into()))?;
        if pr != col {
            for j in 0..n {
                let tmp = a[(col, j)].clone();
                a[(col, j)] = a[(pr, j)].clone();
                a[(pr, j)] = tmp;
                let tmp = inv[(col, j)].clone();
                inv[(col, j)] = inv[(pr, j)].clone();
                inv[(pr, j)] = tmp;
            }
        }
        let pi = mod_inverse(&a[(col, col)], pn).expect("unit pivot");
        for j in 0..n {
            a[(col, j)] = (&a[(col, j)] * &pi).mod_floor(pn);
            inv[(col, j)] = (&inv[(col, j)] * &pi).mod_floor(pn);
        }
        for r in 0..n {
            if r != col && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = (&a[(r, j)] - &f * &a[(col, j)]).mod_floor(pn);
                    inv[(r, j)] = (&inv[(r, j)] - &f * &inv[(col, j)]).mod_floor(pn);
                }
            }
        }
    }
    Ok(inv)
}

fn mat_mul_mod(a: &IntMatrix, b: &IntMatrix, pn: &BigInt) -> IntMatrix {
    a.mul(b).mod_reduce(pn)
}

/// One local check at fixed precision: true iff T preserves the Q_p-span of
/// D_p and induces an integral map on the complementary lattice.
fn local_check_at(
    a: &IntMatrix,
    t: &RatMatrix,
    p: &BigInt,
    n_exp: u32,
) -> Result<(bool, String), Error> {
    let ctx = PadicContext::new(p.clone(), n_exp)?;
    let n = a.dim();
    let dp = divisible_part(a, &ctx)?;
    let pn = ctx.modulus();
    let rm = ctx.report_modulus();
    let aexp = denominator_exponent(t, p);
    if n_exp < 2 * aexp + ctx.slack + 4 {
        return Err(Error::Precision(format!(
            "precision exponent {n_exp} too small for denominator exponent {aexp}"
        )));
    }
    let tp = scaled_int_matrix(t, p, aexp, &pn)?;
    if dp.t_p == n {
        // whole space divisible: no constraint beyond denominator support
        return Ok((true, "full divisible part".into()));
    }
    // complete the divisible basis to a basis of Z_p^n with standard vectors
    let mut s = IntMatrix::zero(n);
    for (j, b) in dp.basis.iter().enumerate() {
        for i in 0..n {
            s[(i, j)] = b[i].clone();
        }
    }
    let non_pivot: Vec<usize> = (0..n).filter(|r| !dp.pivot_rows.contains(r)).collect();
    for (j, &r) in non_pivot.iter().enumerate() {
        s[(r, dp.t_p + j)] = BigInt::one();
    }
    let sinv = invert_mod(&s, p, &pn)?;
    let m = mat_mul_mod(&mat_mul_mod(&sinv, &tp, &pn), &s, &pn);
    let pa = p.pow(aexp);
    // (i) E-rows x B-columns vanish: T maps span(D_p) into its Q_p-span
    for i in dp.t_p..n {
        for j in 0..dp.t_p {
            if !m[(i, j)].mod_floor(&rm).is_zero() {
                return Ok((
                    false,
                    format!("divisible part not preserved (block entry ({i},{j}))"),
                ));
            }
        }
    }
    // (ii) E-rows x E-columns divisible by p^a: quotient map integral
    for i in dp.t_p..n {
        for j in dp.t_p..n {
            if !m[(i, j)].mod_floor(&pa).is_zero() {
                return Ok((
                    false,
                    format!("quotient lattice not preserved (block entry ({i},{j}))"),
                ));
            }
        }
    }
    Ok((true, format!("t_p={}, denominator exponent {aexp}", dp.t_p)))
}

/// Precision policy for the local check.
pub fn policy_precision(a: &IntMatrix, t: &RatMatrix, p: &BigInt) -> u32 {
    let aexp = denominator_exponent(t, p);
    let vdet = valuation(&a.det(), p);
    2 * aexp + vdet + 8
}

/// Decide T ∈ End of the p-localization: the divisible part's Q_p-span must be
/// preserved and the induced quotient map integral. Verified at the policy
/// precision and re-verified at double precision; disagreement is reported as
/// INCONCLUSIVE rather than a silent answer.
pub fn local_end_check(
    a: &IntMatrix,
    t: &RatMatrix,
    p: &BigInt,
    precision_override: Option<u32>,
) -> Decision {
    let n1 = precision_override.unwrap_or_else(|| policy_precision(a, t, p));
    let r1 = local_check_at(a, t, p, n1);
    let r2 = local_check_at(a, t, p, 2 * n1);
    match (r1, r2) {
        (Ok((ok1, detail)), Ok((ok2, _))) if ok1 == ok2 => {
            let transcript = LocalTranscript {
                p: p.to_string(),
                precision_exponent: n1,
                ok: ok1,
                detail,
            };
            let cert = Certificate::LocalChecks {
                transcripts: vec![transcript],
            };
            if ok1 {
                Decision::yes(cert)
            } else {
                Decision::no(cert)
            }
        }
        (Ok(_), Ok(_)) => Decision::inconclusive(format!(
            "p={p}: verdicts differ between precision {n1} and {}",
            2 * n1
        )),
        (Err(e), _) | (_, Err(e)) => Decision::inconclusive(format!("p={p}: {e}")),
    }
}
