//! Pointwise diagnostics on uniform grids: the proportionality factor
//! `f = (v · curl v)/|v|²` and the minimum of `|v|`.

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::field::SpectralVectorField;
use crate::grid::grid_point;

/// Below this value of `min |v|` the quotient defining `f` is rejected.
pub const VANISHING_THRESHOLD: f64 = 1e-8;

/// Values of a scalar on the uniform `n³` grid, with its range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGridReport {
    pub grid: usize,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl ScalarGridReport {
    pub fn from_values(grid: usize, values: Vec<f64>) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ScalarGridReport { grid, values, min, max }
    }

    /// `sup − inf` over the grid.
    pub fn gap(&self) -> f64 {
        self.max - self.min
    }

    /// CSV with header `x1,x2,x3,value`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x1,x2,x3,value")?;
        for (i, v) in self.values.iter().enumerate() {
            let x = grid_point(i, self.grid);
            writeln!(out, "{},{},{},{}", x[0], x[1], x[2], v)?;
        }
        Ok(())
    }
}

/// `f = (v · curl v)/|v|²` sampled on the `grid³` lattice.
pub fn proportionality_factor(v: &SpectralVectorField, grid: usize) -> Result<ScalarGridReport> {
    let vg = v.on_grid(grid);
    let cg = v.curl().on_grid(grid);
    let len = grid * grid * grid;
    let mut values = Vec::with_capacity(len);
    let mut min_norm = f64::INFINITY;
    for p in 0..len {
        let n2: f64 = (0..3).map(|i| vg[i][p] * vg[i][p]).sum();
        min_norm = min_norm.min(n2.sqrt());
        let dot: f64 = (0..3).map(|i| vg[i][p] * cg[i][p]).sum();
        values.push(dot / n2);
    }
    if min_norm <= VANISHING_THRESHOLD {
        return Err(SpectralError::VanishingField { min_norm });
    }
    Ok(ScalarGridReport::from_values(grid, values))
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Solves the 3×3 system `a x = b` by Cramer's rule; `None` if singular.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-300 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (col, xc) in x.iter_mut().enumerate() {
        let mut m = *a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *xc = det(&m) / d;
    }
    Some(x)
}

/// Minimum of `|v|` and where it is attained.
///
/// Grid search, then one coordinate pass at a tenth of the grid spacing,
/// then damped Gauss–Newton steps on `v(x) = 0` that are kept only while
/// they decrease `|v|`.
pub fn locate_min_norm(v: &SpectralVectorField, grid: usize) -> (f64, [f64; 3]) {
    if v.is_empty() {
        return (0.0, [0.0; 3]);
    }
    let vg = v.on_grid(grid);
    let len = grid * grid * grid;
    let (best_idx, _) = (0..len)
        .map(|p| (p, (0..3).map(|i| vg[i][p] * vg[i][p]).sum::<f64>()))
        .fold((0, f64::INFINITY), |acc, (p, n2)| if n2 < acc.1 { (p, n2) } else { acc });
    let mut x = grid_point(best_idx, grid);
    let mut best = norm3(&v.eval(&x));

    let h = TAU / grid as f64;
    let step = h / 10.0;
    for axis in 0..3 {
        let base = x;
        for m in -10..=10 {
            let mut y = base;
            y[axis] += f64::from(m) * step;
            let val = norm3(&v.eval(&y));
            if val < best {
                best = val;
                x = y;
            }
        }
    }

    let mut damping = 1e-3;
    for _ in 0..100 {
        if best == 0.0 {
            break;
        }
        let r = v.eval(&x);
        let j = v.jacobian_at(&x);
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for a in 0..3 {
            for b in 0..3 {
                jtj[a][b] = (0..3).map(|i| j[i][a] * j[i][b]).sum();
            }
            jtr[a] = -(0..3).map(|i| j[i][a] * r[i]).sum::<f64>();
        }
        let scale = (jtj[0][0] + jtj[1][1] + jtj[2][2]).max(1e-300);
        for (a, row) in jtj.iter_mut().enumerate() {
            row[a] += damping * scale;
        }
        let Some(d) = solve3(&jtj, &jtr) else { break };
        let y = [x[0] + d[0], x[1] + d[1], x[2] + d[2]];
        let val = norm3(&v.eval(&y));
        if val < best {
            best = val;
            x = y;
            damping = (damping * 0.1).max(1e-12);
        } else {
            damping *= 10.0;
            if damping > 1e6 {
                break;
            }
        }
    }
    (best, x.map(|c| c.rem_euclid(TAU)))
}

/// `min |v|` over T³ (see [`locate_min_norm`]).
pub fn min_norm(v: &SpectralVectorField, grid: usize) -> f64 {
    locate_min_norm(v, grid).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{make_abc, AbcParams};
    use crate::lattice::WaveVector;

    #[test]
    fn abc_factor_is_one() {
        let r = proportionality_factor(&make_abc(AbcParams::new(1.0, 0.5, 0.1)), 16).unwrap();
        assert!(r.gap() <= 1e-10);
        assert!((r.min - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn shear_vanishes() {
        let mut v = SpectralVectorField::zero(1);
        v.add_trig(WaveVector::unit(1), [0.0; 3], [1.0, 0.0, 0.0]);
        assert!(matches!(proportionality_factor(&v, 16), Err(SpectralError::VanishingField { .. })));
    }

    #[test]
    fn factor_is_scale_invariant() {
        let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
        let a = proportionality_factor(&v, 8).unwrap();
        let b = proportionality_factor(&v.scale(-3.5), 8).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn min_norm_values() {
        // |v|² = 5/4 + sin x₁ cos x₃ for (1, 1/2, 0), so min |v| = 1/2.
        let m = min_norm(&make_abc(AbcParams::new(1.0, 0.5, 0.0)), 24);
        assert!((m - 0.5).abs() < 1e-9, "{m}");
        // ABC(1,1,1) has stagnation points; use a grid that misses them.
        let m = min_norm(&make_abc(AbcParams::new(1.0, 1.0, 1.0)), 30);
        assert!(m <= 1e-3, "{m}");
        assert_eq!(min_norm(&SpectralVectorField::zero(1), 8), 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = ScalarGridReport::from_values(2, vec![1.0; 8]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x1,x2,x3,value\n"));
        assert_eq!(text.lines().count(), 9);
    }
}
