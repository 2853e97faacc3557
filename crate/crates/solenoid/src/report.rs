//! JSON assembly helpers: stable key order, big integers as decimal strings
//! once they exceed the 53-bit safe range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::endo::GaInvariants;
use crate::error::Error;
use crate::exact::matrix::{IntMatrix, RatMatrix};

const SAFE_MAX: i64 = (1i64 << 53) - 1;

pub fn json_big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE_MAX => json!(v),
        _ => json!(x.to_string()),
    }
}

pub fn json_rat(q: &BigRational) -> Value {
    if q.denom().is_one() {
        json_big(q.numer())
    } else {
        json!([json_big(q.numer()), json_big(q.denom())])
    }
}

pub fn json_int_matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.rows_vec()
            .iter()
            .map(|r| Value::Array(r.iter().map(json_big).collect()))
            .collect(),
    )
}

pub fn json_rat_matrix(m: &RatMatrix) -> Value {
    let n = m.dim();
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| json_rat(&m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn invariants_block(inv: &GaInvariants) -> Value {
    let mut t = Map::new();
    for (p, m) in &inv.t {
        t.insert(p.to_string(), json!(m));
    }
    json!({
        "det": json_big(&inv.det),
        "char_poly": format!("{:?}", inv.h),
        "char_poly_coeffs": (0..=inv.h.degree()).map(|i| json_big(&inv.h.coeff(i))).collect::<Vec<_>>(),
        "p": inv.p.iter().map(json_big).collect::<Vec<_>>(),
        "p_prime": inv.p_prime.iter().map(json_big).collect::<Vec<_>>(),
        "t": Value::Object(t),
    })
}

/// Parse a square matrix of integers (numbers or decimal strings).
pub fn parse_int_matrix(v: &Value) -> Result<IntMatrix, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Input("matrix must be a JSON array of rows".into()))?;
    let n = rows.len();
    let mut m = IntMatrix::zero(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Input("matrix rows must be arrays".into()))?;
        if row.len() != n {
            return Err(Error::Input(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = parse_big(e)?;
        }
    }
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    Ok(m)
}

/// Parse a square matrix of rationals: entries are integers or [num, den].
pub fn parse_rat_matrix(v: &Value) -> Result<RatMatrix, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Input("transform must be a JSON array of rows".into()))?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::Input("empty transform".into()));
    }
    let mut m = RatMatrix::zero(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Input("transform rows must be arrays".into()))?;
        if row.len() != n {
            return Err(Error::Input(format!(
                "transform is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = parse_rational(e)?;
        }
    }
    Ok(m)
}

pub fn parse_big(v: &Value) -> Result<BigInt, Error> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Input(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Input(format!("not an integer: {s:?}"))),
        _ => Err(Error::Input(format!("not an integer: {v}"))),
    }
}

pub fn parse_rational(v: &Value) -> Result<BigRational, Error> {
    if let Value::Array(pair) = v {
        if pair.len() != 2 {
            return Err(Error::Input(format!(
                "rational entries are [num, den] pairs: {v}"
            )));
        }
        let num = parse_big(&pair[0])?;
        let den = parse_big(&pair[1])?;
        if den.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        return Ok(BigRational::new(num, den));
    }
    Ok(BigRational::from_integer(parse_big(v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_boundary() {
        assert_eq!(json_big(&BigInt::from(42)), json!(42));
        let big: BigInt = BigInt::from(1i64 << 60);
        assert_eq!(json_big(&big), json!(big.to_string()));
    }

    #[test]
    fn parse_round_trip() {
        let v = json!([[1, 2], [3, "123456789012345678901"]]);
        let m = parse_int_matrix(&v).unwrap();
        assert_eq!(json_int_matrix(&m), v);
        let v = json!([[1, [1, 2]], [[-3, 4], 0]]);
        let m = parse_rat_matrix(&v).unwrap();
        assert_eq!(json_rat_matrix(&m), v);
    }

    #[test]
    fn reject_bad_shapes() {
        assert!(parse_int_matrix(&json!([[1, 2], [3]])).is_err());
        assert!(parse_int_matrix(&json!("x")).is_err());
        assert!(parse_rat_matrix(&json!([[1, [1, 0]], [0, 1]])).is_err());
    }
}
