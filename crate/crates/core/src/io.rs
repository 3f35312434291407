//! JSON matrix files.
//!
//! A file looks like `{"rows": m, "cols": n, "entries": [[[a0, a1, a2, a3], …], …]}`.
//! Components are JSON numbers or strings such as `"-3/7"`; strings are read
//! exactly, and decimal numbers are read exactly on the rational backend.

use std::io::Read;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{QError, Result};
use crate::qmatrix::QMatrix;
use crate::quat::Quaternion;
use crate::scalar::{parse_rational, Real};

fn parse_err(msg: impl Into<String>) -> QError {
    QError::Parse(msg.into())
}

fn component<T: Real>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => parse_rational(s)
            .map(|r| T::from_rational(&r))
            .ok_or_else(|| parse_err(format!("bad number '{s}'"))),
        Value::Number(num) if T::EXACT => parse_rational(&num.to_string())
            .map(|r| T::from_rational(&r))
            .ok_or_else(|| parse_err(format!("bad number {num}"))),
        Value::Number(num) => num
            .as_f64()
            .and_then(T::from_f64)
            .ok_or_else(|| parse_err(format!("bad number {num}"))),
        other => Err(parse_err(format!("expected a number, found {other}"))),
    }
}

fn quaternion<T: Real>(v: &Value) -> Result<Quaternion<T>> {
    let parts = v.as_array().ok_or_else(|| parse_err("a quaternion must be a 4-element array"))?;
    if parts.len() != 4 {
        return Err(parse_err(format!("a quaternion needs 4 components, found {}", parts.len())));
    }
    Ok(Quaternion::new(
        component(&parts[0])?,
        component(&parts[1])?,
        component(&parts[2])?,
        component(&parts[3])?,
    ))
}

fn count(doc: &Map<String, Value>, key: &str) -> Result<usize> {
    doc.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| parse_err(format!("missing or invalid '{key}'")))
}

/// Reads a matrix from a parsed JSON document.
pub fn matrix_from_json<T: Real>(doc: &Value) -> Result<QMatrix<T>> {
    let doc = doc.as_object().ok_or_else(|| parse_err("the document must be an object"))?;
    let (rows, cols) = (count(doc, "rows")?, count(doc, "cols")?);
    let entries = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing 'entries'"))?;
    if entries.len() != rows {
        return Err(QError::dims("matrix file", format!("{} entry rows for rows = {rows}", entries.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in entries.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("entry row {i} is not an array")))?;
        if row.len() != cols {
            return Err(QError::dims("matrix file", format!("row {i} has {} entries for cols = {cols}", row.len())));
        }
        for q in row {
            data.push(quaternion(q)?);
        }
    }
    QMatrix::new(rows, cols, data)
}

/// Renders a matrix. Exact backends write components as `"p/q"` strings.
pub fn matrix_to_json<T: Real>(a: &QMatrix<T>) -> Value {
    let comp = |x: &T| {
        if T::EXACT {
            Value::String(x.to_string())
        } else {
            json!(x.to_f64())
        }
    };
    let entries: Vec<Value> = (0..a.rows())
        .map(|i| {
            Value::Array(
                a.row(i)
                    .iter()
                    .map(|q| Value::Array(q.components().into_iter().map(comp).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({"rows": a.rows(), "cols": a.cols(), "entries": entries})
}

pub fn parse_matrix<T: Real>(text: &str) -> Result<QMatrix<T>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))?;
    matrix_from_json(&doc)
}

/// Reads a matrix file; the path `-` means standard input.
pub fn read_matrix<T: Real>(path: &Path) -> Result<QMatrix<T>> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| parse_err(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?
    };
    parse_matrix(&text)
}

/// Entries of a single-row or single-column matrix, in order.
pub fn as_vector<T: Real>(a: QMatrix<T>) -> Result<Vec<Quaternion<T>>> {
    if a.rows() == 1 || a.cols() == 1 {
        Ok(a.into_entries())
    } else {
        Err(QError::dims("vector file", format!("{}x{} is not a vector", a.rows(), a.cols())))
    }
}
