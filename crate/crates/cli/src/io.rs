//! Matrix files: one JSON object `{"n": .., "re": [[..]], "im": [[..]]}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sectorial_core::{Complex64, ComplexMatrix};

use crate::error::HarnessError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> HarnessError {
    HarnessError::Schema {
        line: None,
        column: None,
        field: field.into(),
        message: message.into(),
    }
}

fn check_grid(name: &str, rows: &[Vec<f64>], n: usize) -> Result<(), HarnessError> {
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(schema(
            format!("{name}[{i}]"),
            format!("ragged rows: expected {cols} entries, found {}", r.len()),
        ));
    }
    if rows.len() != cols {
        return Err(HarnessError::NonSquare {
            field: name.to_string(),
            rows: rows.len(),
            cols,
        });
    }
    if rows.len() != n {
        return Err(schema(name, format!("declared n = {n} but array is {}x{}", rows.len(), rows.len())));
    }
    Ok(())
}

/// Parses the matrix object notation.
pub fn parse_matrix_str(text: &str) -> Result<ComplexMatrix, HarnessError> {
    let raw: RawMatrix = serde_json::from_str(text).map_err(|e| HarnessError::Schema {
        line: Some(e.line()),
        column: Some(e.column()),
        field: String::new(),
        message: e.to_string(),
    })?;
    if raw.n == 0 {
        return Err(schema("n", "dimension must be at least 1"));
    }
    check_grid("re", &raw.re, raw.n)?;
    check_grid("im", &raw.im, raw.n)?;
    let data = raw
        .re
        .iter()
        .flatten()
        .zip(raw.im.iter().flatten())
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    Ok(ComplexMatrix::from_row_major(raw.n, data)?)
}

pub fn parse_matrix_file(path: &Path) -> Result<ComplexMatrix, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix_str(&text)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_grid(out: &mut String, a: &ComplexMatrix, part: impl Fn(Complex64) -> f64) {
    let n = a.dim();
    out.push('[');
    for i in 0..n {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&format_f64(part(a[(i, j)])));
        }
        out.push(']');
    }
    out.push(']');
}

/// Serializes in the matrix object notation at full precision.
pub fn matrix_to_string(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"n\": {}, \"re\": ", a.dim());
    write_grid(&mut out, a, |z| z.re);
    out.push_str(", \"im\": ");
    write_grid(&mut out, a, |z| z.im);
    out.push('}');
    out
}

pub fn write_matrix_file(path: &Path, a: &ComplexMatrix) -> Result<(), HarnessError> {
    fs::write(path, matrix_to_string(a) + "\n").map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `{n, re, im}` as a JSON value, for embedding matrices in reports.
pub fn matrix_to_json(a: &ComplexMatrix) -> serde_json::Value {
    let n = a.dim();
    let grid = |f: fn(Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(a[(i, j)])).collect()).collect()
    };
    serde_json::json!({ "n": n, "re": grid(|z| z.re), "im": grid(|z| z.im) })
}
