//! Problem files: a JSON object listing the matrices of a family.
//!
//! ```json
//! {
//!   "label": "rational pair",
//!   "labels": ["A1", "A2"],
//!   "matrices": [
//!     [["15/17", "-16/17"], ["4/17", "15/17"]],
//!     [[0.8, 0.6], [-0.6, 0.8]]
//!   ]
//! }
//! ```
//!
//! Entries are JSON numbers or strings holding either a decimal number or a
//! rational `p/q`, which is converted to the nearest double by division.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixSet};

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub label: Option<String>,
    /// Per-matrix names, when given.
    pub labels: Option<Vec<String>>,
    pub matrices: Vec<Matrix>,
}

impl ProblemFile {
    pub fn matrix_set(&self) -> Result<MatrixSet> {
        MatrixSet::new(self.matrices.clone())
    }
}

fn err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &[u8]) -> Result<ProblemFile> {
    let root: Value = serde_json::from_slice(text).map_err(|e| {
        err(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| err("top level", "expected a JSON object"))?;

    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err("label", "expected a string")),
    };

    let list = obj
        .get("matrices")
        .ok_or_else(|| err("top level", "missing field `matrices`"))?
        .as_array()
        .ok_or_else(|| err("matrices", "expected an array of matrices"))?;
    if list.is_empty() {
        return Err(err("matrices", "at least one matrix is required"));
    }

    let mut matrices = Vec::with_capacity(list.len());
    let mut dim = None;
    for (k, m) in list.iter().enumerate() {
        let rows = m
            .as_array()
            .ok_or_else(|| err(format!("matrix {k}"), "expected an array of rows"))?;
        let size = rows.len();
        if size == 0 {
            return Err(err(format!("matrix {k}"), "matrix has no rows"));
        }
        match dim {
            None => dim = Some(size),
            Some(d) if d != size => {
                return Err(err(
                    format!("matrix {k}"),
                    format!("has {size} rows but earlier matrices are {d}x{d}"),
                ))
            }
            _ => {}
        }
        let mut entries = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| err(format!("matrix {k}, row {r}"), "expected an array"))?;
            if row.len() != size {
                return Err(err(
                    format!("matrix {k}, row {r}"),
                    format!(
                        "has {} entries, expected {size} (matrices must be square)",
                        row.len()
                    ),
                ));
            }
            for (c, v) in row.iter().enumerate() {
                let loc = || format!("matrix {k}, row {r}, column {c}");
                let x = parse_entry(v).map_err(|m| err(loc(), m))?;
                if !x.is_finite() {
                    return Err(err(loc(), format!("entry {v} is not finite")));
                }
                entries.push(x);
            }
        }
        matrices.push(Matrix::new(size, entries)?);
    }

    let labels = match obj.get("labels") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            if items.len() != matrices.len() {
                return Err(err(
                    "labels",
                    format!("{} labels for {} matrices", items.len(), matrices.len()),
                ));
            }
            Some(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| err(format!("labels[{i}]"), "expected a string"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        Some(_) => return Err(err("labels", "expected an array of strings")),
    };

    Ok(ProblemFile {
        label,
        labels,
        matrices,
    })
}

fn parse_entry(v: &Value) -> std::result::Result<f64, String> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("number {n} is not representable")),
        Value::String(s) => parse_scalar(s),
        other => Err(format!(
            "expected a number or a \"p/q\" string, got {other}"
        )),
    }
}

/// `"0.25"`, `"-3"` or `"15/17"`.
pub fn parse_scalar(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {t:?} as a number"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (num(p)?, num(q)?);
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(p / q)
        }
        None => num(s),
    }
}
