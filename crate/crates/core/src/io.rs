//! PMF file ingestion and Lorenz-curve CSV emission.
//!
//! Accepted inputs are JSON objects `{"pmf": [...]}` or a single column of
//! masses, one per line, with an optional non-numeric header line.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::pmf::{make_pmf, OrderedPmf};

#[derive(Deserialize)]
struct PmfFile {
    pmf: Vec<f64>,
}

/// Parses PMF text in either accepted format.
pub fn parse_pmf(text: &str, strict: bool) -> Result<OrderedPmf> {
    let trimmed = text.trim_start();
    let values = if trimmed.starts_with('{') {
        serde_json::from_str::<PmfFile>(trimmed)
            .map_err(|e| Error::Parse(format!("invalid PMF JSON: {e}")))?
            .pmf
    } else {
        parse_column(text)?
    };
    make_pmf(&values, strict)
}

fn parse_column(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let cell = line.trim().trim_end_matches(',').trim();
        if cell.is_empty() {
            continue;
        }
        if cell.contains(',') {
            return Err(Error::Parse(format!(
                "line {}: expected a single column, got {line:?}",
                lineno + 1
            )));
        }
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if values.is_empty() && lineno == 0 => {}
            Err(_) => {
                return Err(Error::Parse(format!(
                    "line {}: {cell:?} is not a number",
                    lineno + 1
                )))
            }
        }
    }
    Ok(values)
}

pub fn load_pmf(path: impl AsRef<Path>, strict: bool) -> Result<OrderedPmf> {
    parse_pmf(&fs::read_to_string(path)?, strict)
}

/// Rounds to `precision` decimal places.
pub fn round_to(x: f64, precision: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(precision as i32);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed-point rendering with trailing zeros removed.
pub fn format_number(x: f64, precision: usize) -> String {
    let s = format!("{:.*}", precision, round_to(x, precision));
    if !s.contains('.') {
        return s;
    }
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Lorenz curve as CSV: header `t,L` and one row per breakpoint, starting at
/// the origin.
pub fn lorenz_csv(p: &OrderedPmf, precision: usize) -> String {
    let mut out = String::from("t,L\n");
    for (t, l) in p.prefix_sums().points() {
        out.push_str(&format!("{},{}\n", t, format_number(l, precision)));
    }
    out
}

pub fn emit_lorenz_csv(p: &OrderedPmf, path: impl AsRef<Path>, precision: usize) -> Result<()> {
    fs::write(path, lorenz_csv(p, precision))?;
    Ok(())
}
