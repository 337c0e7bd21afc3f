//! JSON encodings. Integers fitting in `i64` are numbers, larger ones strings.

use fatf_core::intlinalg::Matrix;
use fatf_core::{FatfSubgroup, Int, IntMatrix, Rational, Word};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn integer(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `{"num": p, "den": q}` in lowest terms with `q > 0`.
pub fn rational(r: &Rational) -> Value {
    json!({"num": integer(r.numer()), "den": integer(r.denom())})
}

pub fn vector(v: &[Int]) -> Value {
    Value::Array(v.iter().map(integer).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn words(ws: &[Word]) -> Value {
    Value::Array(ws.iter().map(|w| json!(word(w))).collect())
}

fn word(w: &Word) -> String {
    if w.is_identity() {
        String::new()
    } else {
        w.to_string()
    }
}

pub fn subgroup(h: &FatfSubgroup) -> Value {
    let (m, n) = h.ambient();
    json!({
        "ambient": {"m": m, "n": n},
        "words": words(h.words()),
        "A": matrix(h.vectors()),
        "L": matrix(h.lattice().basis()),
        "reduced_rank": h.reduced_rank(),
    })
}

fn parse_int(v: &Value) -> Result<Int, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| format!("not an integer: {n}")),
        Value::String(s) => s.parse().map_err(|_| format!("not an integer: {s}")),
        other => Err(format!("not an integer: {other}")),
    }
}

/// A list of equal-length rows; `cols` fixes the width of an empty matrix.
pub fn parse_matrix(v: Option<&Value>, cols: Option<usize>) -> Result<IntMatrix, String> {
    let rows = match v {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(rows)) => rows.clone(),
        Some(other) => return Err(format!("expected a matrix, found {other}")),
    };
    let mut data = Vec::with_capacity(rows.len());
    for row in &rows {
        let Value::Array(entries) = row else {
            return Err(format!("expected a row, found {row}"));
        };
        data.push(
            entries
                .iter()
                .map(parse_int)
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let width = match (cols, data.first()) {
        (Some(c), _) => c,
        (None, Some(r)) => r.len(),
        (None, None) => {
            return Err("cannot infer the width of an empty matrix; give `m`/`p`".into())
        }
    };
    Matrix::from_rows(width, data).map_err(|e| e.to_string())
}
