//! `P = (1/2πi) ∮ (z − A)⁻¹ dz` over a circle, by the trapezoidal rule.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GalerkinError, Result};

pub const DEFAULT_NODES: usize = 64;

/// Eigenvalues within this fraction of the radius from the contour are
/// rejected.
pub const CONTOUR_MARGIN: f64 = 1e-6;

/// Number of eigenvalues of a symmetric `A` strictly inside the circle.
pub fn enclosed_count(a: &DMatrix<f64>, center: f64, radius: f64) -> usize {
    a.symmetric_eigenvalues().iter().filter(|&&l| (l - center).abs() < radius).count()
}

fn check_contour(a: &DMatrix<f64>, center: f64, radius: f64) -> Result<()> {
    for &l in a.symmetric_eigenvalues().iter() {
        let distance = ((l - center).abs() - radius).abs();
        if distance < CONTOUR_MARGIN * radius {
            return Err(GalerkinError::IllConditionedContour { eigenvalue: l, distance });
        }
    }
    Ok(())
}

/// Nodes sit at angles `2π (j + ½) / N`, so they come in conjugate pairs
/// and only the upper half needs a resolvent solve.
pub fn spectral_projector(a: &DMatrix<f64>, center: f64, radius: f64, nodes: usize) -> Result<DMatrix<f64>> {
    if !a.is_square() || nodes < 2 || nodes % 2 != 0 || !(radius > 0.0) {
        return Err(GalerkinError::Invalid(format!(
            "need a square matrix, an even node count and a positive radius (nodes {nodes}, radius {radius})"
        )));
    }
    check_contour(a, center, radius)?;
    let d = a.nrows();
    let ac = a.map(|v| Complex64::new(v, 0.0));
    let identity = DMatrix::<Complex64>::identity(d, d);
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..nodes / 2 {
        let theta = TAU * (j as f64 + 0.5) / nodes as f64;
        let w = Complex64::from_polar(radius, theta);
        let z = Complex64::new(center, 0.0) + w;
        let shifted = &identity * z - &ac;
        let resolvent = shifted
            .lu()
            .solve(&identity)
            .ok_or(GalerkinError::IllConditionedContour { eigenvalue: z.re, distance: 0.0 })?;
        sum += resolvent * w;
    }
    let mut p = sum.map(|c| 2.0 * c.re / nodes as f64);
    let t = p.transpose();
    p = (p + t) * 0.5;
    Ok(p)
}
