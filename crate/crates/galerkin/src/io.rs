//! Matrices as `row,col,value` CSV with a JSON metadata sidecar.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use beltrami_contact::MetricField;
use beltrami_core::io::sha256_hex;

use crate::error::{GalerkinError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixMetadata {
    pub name: String,
    pub truncation: u32,
    pub dimension: usize,
    pub metric_hash: String,
    pub nonzeros: usize,
}

pub fn metric_hash(g: &MetricField) -> Result<String> {
    Ok(sha256_hex(serde_json::to_string(g)?.as_bytes()))
}

/// Nonzero entries only, in row-major order, values in round-trip precision.
pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::from("row,col,value\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                let _ = writeln!(out, "{i},{j},{v:e}");
            }
        }
    }
    out
}

pub fn matrix_from_csv(text: &str, dim: usize) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(dim, dim);
    for (line_no, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        let bad = || GalerkinError::Invalid(format!("malformed matrix line {}: {line}", line_no + 1));
        if parts.len() != 3 {
            return Err(bad());
        }
        let i: usize = parts[0].parse().map_err(|_| bad())?;
        let j: usize = parts[1].parse().map_err(|_| bad())?;
        let v: f64 = parts[2].parse().map_err(|_| bad())?;
        if i >= dim || j >= dim {
            return Err(bad());
        }
        m[(i, j)] = v;
    }
    Ok(m)
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_matrix(dir: &Path, stem: &str, m: &DMatrix<f64>, truncation: u32, metric_hash: &str) -> Result<MatrixMetadata> {
    let meta = MatrixMetadata {
        name: stem.to_string(),
        truncation,
        dimension: m.nrows(),
        metric_hash: metric_hash.to_string(),
        nonzeros: m.iter().filter(|v| **v != 0.0).count(),
    };
    std::fs::write(dir.join(format!("{stem}.csv")), matrix_to_csv(m))?;
    std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&meta)?)?;
    Ok(meta)
}

pub fn read_matrix(dir: &Path, stem: &str) -> Result<(DMatrix<f64>, MatrixMetadata)> {
    let meta: MatrixMetadata = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json")))?)?;
    let m = matrix_from_csv(&std::fs::read_to_string(dir.join(format!("{stem}.csv")))?, meta.dimension)?;
    Ok((m, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, -2.5e-17, 0.0, std::f64::consts::PI, 0.0, 1e300, 0.0, 0.1]);
        let back = matrix_from_csv(&matrix_to_csv(&m), 3).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn malformed_lines_are_errors() {
        assert!(matrix_from_csv("row,col,value\n0,0\n", 2).is_err());
        assert!(matrix_from_csv("row,col,value\n5,0,1\n", 2).is_err());
    }
}
