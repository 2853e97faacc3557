use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::Error;

/// Column-style Hermite normal form of a square matrix: M * U = H with U
/// unimodular, H upper-triangular with positive pivots and entries right of
/// each pivot reduced into [0, pivot).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

type Col = Vec<BigInt>;

fn apply_combine(cs: &mut [Col], p: usize, c: usize, x: &BigInt, y: &BigInt, ag: &BigInt, bg: &BigInt) {
    let n = cs[p].len();
    for i in 0..n {
        let vp = cs[p][i].clone();
        let vc = cs[c][i].clone();
        cs[p][i] = x * &vp + y * &vc;
        cs[c][i] = ag * &vc - bg * &vp;
    }
}

fn negate_col(col: &mut Col) {
    for v in col.iter_mut() {
        *v = -v.clone();
    }
}

/// Bottom-up column echelon: after the call, for each processed row r the only
/// active column with a nonzero entry in row r is the rightmost one. Returns,
/// per row (bottom to top), the pivot column index or None.
fn echelonize(cols: &mut [Col], track: &mut [Col], nrows: usize) -> Vec<Option<usize>> {
    let m = cols.len();
    let mut last = m; // exclusive upper bound of active columns
    let mut pivots = vec![None; nrows];
    for r in (0..nrows).rev() {
        if last == 0 {
            break;
        }
        let p = last - 1;
        // Move a column with nonzero entry in row r into position p.
        if cols[p][r].is_zero() {
            match (0..p).rev().find(|&c| !cols[c][r].is_zero()) {
                Some(c) => {
                    cols.swap(p, c);
                    track.swap(p, c);
                }
                None => continue, // no pivot in this row
            }
        }
        for c in 0..p {
            if !cols[c][r].is_zero() {
                let a = cols[p][r].clone();
                let b = cols[c][r].clone();
                let eg = a.extended_gcd(&b);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let ag = &a / &g;
                let bg = &b / &g;
                apply_combine(cols, p, c, &x, &y, &ag, &bg);
                apply_combine(track, p, c, &x, &y, &ag, &bg);
            }
        }
        if cols[p][r].is_negative() {
            negate_col(&mut cols[p]);
            negate_col(&mut track[p]);
        }
        pivots[r] = Some(p);
        last = p;
    }
    pivots
}

fn mat_cols(m: &IntMatrix) -> Vec<Col> {
    let n = m.dim();
    (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)].clone()).collect())
        .collect()
}

fn cols_to_mat(cols: &[Col], n: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = col[i].clone();
        }
    }
    m
}

/// Hermite normal form of a square integer matrix.
pub fn hnf(m: &IntMatrix, full_rank: bool) -> Result<HnfResult, Error> {
    let n = m.dim();
    let mut cols = mat_cols(m);
    let mut track = mat_cols(&IntMatrix::identity(n));
    let pivots = echelonize(&mut cols, &mut track, n);
    if full_rank && pivots.iter().any(|p| p.is_none()) {
        return Err(Error::SingularLattice);
    }
    // In the full-rank square case pivot of row r sits in column r.
    // Reduce entries right of each pivot into [0, pivot), bottom row first so
    // a reduction never disturbs an already-reduced row below it.
    for i in (0..n).rev() {
        if pivots[i] != Some(i) {
            continue;
        }
        let pivot = cols[i][i].clone();
        for j in i + 1..n {
            let q = cols[j][i].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for row in 0..n {
                let t = &q * &cols[i][row];
                cols[j][row] -= t;
                let t = &q * &track[i][row];
                track[j][row] -= t;
            }
        }
    }
    Ok(HnfResult {
        h: cols_to_mat(&cols, n),
        u: cols_to_mat(&track, n),
    })
}

/// Canonical HNF basis of the lattice spanned by the columns of an n x m
/// integer generator matrix (given as columns). Errors when the span has
/// rank < n.
pub fn lattice_hnf(n: usize, gens: &[Col]) -> Result<IntMatrix, Error> {
    let mut cols: Vec<Col> = gens.to_vec();
    let mut track: Vec<Col> = vec![vec![]; cols.len()];
    let pivots = echelonize(&mut cols, &mut track, n);
    if pivots.iter().any(|p| p.is_none()) {
        return Err(Error::SingularLattice);
    }
    let m = cols.len();
    // Pivot of row r is in column m - n + r; keep the last n columns.
    let mut kept: Vec<Col> = cols[m - n..].to_vec();
    for i in 0..n {
        if kept[i][i].is_negative() {
            negate_col(&mut kept[i]);
        }
    }
    for i in (0..n).rev() {
        let pivot = kept[i][i].clone();
        for j in i + 1..n {
            let q = kept[j][i].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for row in 0..n {
                let t = &q * &kept[i][row];
                kept[j][row] -= t;
            }
        }
    }
    Ok(cols_to_mat(&kept, n))
}

/// Basis (as columns) of the integer kernel {x in Z^m : M x = 0} of an
/// nrows x m matrix given by columns.
pub fn int_kernel(nrows: usize, cols_in: &[Col]) -> Vec<Col> {
    let m = cols_in.len();
    let mut cols = cols_in.to_vec();
    let mut track: Vec<Col> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    echelonize(&mut cols, &mut track, nrows);
    cols.iter()
        .zip(track.iter())
        .filter(|(c, _)| c.iter().all(|v| v.is_zero()))
        .map(|(_, t)| t.clone())
        .collect()
}
