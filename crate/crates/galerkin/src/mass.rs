//! Mass matrices `M_ij = ∫ g(e_i♯, e_j♯) vol_g = ∫ e_iᵀ G e_j dx` with
//! `G = √det g · g⁻¹`, and the ε-derivative along a metric velocity.
//!
//! `G` is sampled on a uniform grid and its Fourier coefficients up to
//! `|m|∞ ≤ 2K` are read off an FFT; each entry is then a finite sum over
//! matched exponentials.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use rayon::prelude::*;

use beltrami_contact::metric::to_matrix;
use beltrami_contact::{MetricFamily, MetricField, SymTensor};
use beltrami_core::grid::{analyze, grid_point};

use crate::basis::FormBasis;
use crate::error::{GalerkinError, Result};

/// Fourier coefficients below this fraction of the largest are dropped so
/// that structurally absent couplings are exact zeros.
pub const COEFF_PRUNE: f64 = 1e-14;

/// Grid for the mass quadrature: exact for constant metrics, and for
/// varying metrics at least `2 (2K + 2 deg g) + 2` and 32 nodes per axis.
pub fn mass_grid_size(basis: &FormBasis, g: &MetricField) -> usize {
    let k = basis.truncation as usize;
    if g.as_constant().is_some() {
        return 4 * k + 2;
    }
    let n = 2 * (2 * k + 2 * g.degree() as usize) + 2;
    n.max(32).next_multiple_of(2)
}

/// Symmetric 3×3 weight sampled on an `n³` grid.
pub type WeightGrid = Vec<[[f64; 3]; 3]>;

const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn pair_slot(p: usize, q: usize) -> usize {
    let (a, b) = if p <= q { (p, q) } else { (q, p) };
    PAIRS.iter().position(|&s| s == (a, b)).expect("valid index pair")
}

/// Assembles `∫ e_iᵀ W e_j dx` for a weight sampled on a grid.
pub fn assemble_weighted(basis: &FormBasis, weight: &WeightGrid, n: usize) -> DMatrix<f64> {
    let r = 2 * basis.truncation;
    assert!(2 * r < n as u32, "quadrature grid too coarse");
    let side = (2 * r + 1) as i32;
    let mut coeffs: Vec<Vec<Complex64>> = PAIRS
        .iter()
        .map(|&(p, q)| {
            let vals: Vec<f64> = weight.iter().map(|w| w[p][q]).collect();
            analyze(&vals, n, r).into_iter().map(|(_, c)| c).collect()
        })
        .collect();
    let biggest = coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for c in coeffs.iter_mut().flatten() {
        if c.norm() <= COEFF_PRUNE * biggest {
            *c = Complex64::default();
        }
    }
    let lookup = |slot: usize, m: [i32; 3]| {
        let ri = r as i32;
        coeffs[slot][(((m[0] + ri) * side + (m[1] + ri)) * side + (m[2] + ri)) as usize]
    };
    let terms: Vec<_> = basis.elements.iter().map(|e| e.exponentials()).collect();
    let d = basis.dim();
    let vol = TAU.powi(3);
    let rows: Vec<Vec<f64>> = (0..d)
        .into_par_iter()
        .map(|i| {
            let ei = &basis.elements[i];
            (0..d)
                .map(|j| {
                    let slot = pair_slot(ei.axis, basis.elements[j].axis);
                    let mut s = Complex64::default();
                    for (ka, ca) in &terms[i] {
                        for (kb, cb) in &terms[j] {
                            let m = [-(ka.0[0] + kb.0[0]), -(ka.0[1] + kb.0[1]), -(ka.0[2] + kb.0[2])];
                            s += ca * cb * lookup(slot, m);
                        }
                    }
                    s.re * vol
                })
                .collect()
        })
        .collect();
    let mut m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
    // The two triangles agree up to rounding; take the mean for exact symmetry.
    let mt = m.transpose();
    m = (m + mt) * 0.5;
    m
}

fn check_positive(g: &[[[f64; 3]; 3]], n: usize) -> Result<()> {
    for (p, gp) in g.iter().enumerate() {
        let e = to_matrix(gp).symmetric_eigenvalues().min();
        if !(e > 0.0) {
            return Err(GalerkinError::NotPositiveDefinite { min_eigenvalue: e, x: grid_point(p, n) });
        }
    }
    Ok(())
}

fn density_inverse(gm: &Matrix3<f64>) -> (f64, Matrix3<f64>) {
    let ginv = gm.try_inverse().expect("positive definite metric is invertible");
    (gm.determinant().sqrt(), ginv)
}

pub fn assemble_mass(g: &MetricField, basis: &FormBasis) -> Result<DMatrix<f64>> {
    let n = mass_grid_size(basis, g);
    let gs = g.on_grid(n);
    check_positive(&gs, n)?;
    let w: WeightGrid = gs
        .iter()
        .map(|gp| {
            let (sd, ginv) = density_inverse(&to_matrix(gp));
            let m = ginv * sd;
            [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
        })
        .collect();
    Ok(assemble_weighted(basis, &w, n))
}

/// `d/dε (√det g g⁻¹) = −√det g g⁻¹ ġ g⁻¹ + ½ tr(g⁻¹ ġ) √det g g⁻¹`.
pub fn mass_velocity_weight(g: &[[f64; 3]; 3], gdot: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let (sd, ginv) = density_inverse(&to_matrix(g));
    let hd = to_matrix(gdot);
    let m = -(ginv * hd * ginv) * sd + ginv * (0.5 * (ginv * hd).trace() * sd);
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
}

/// `dM` along the metric velocity `ġ = h`.
pub fn assemble_mass_derivative(g: &MetricField, h: &SymTensor, basis: &FormBasis) -> Result<DMatrix<f64>> {
    let n = mass_grid_size(basis, g).max(2 * (2 * basis.truncation as usize + 2 * h.degree() as usize) + 2);
    let n = n.next_multiple_of(2);
    let gs = g.on_grid(n);
    check_positive(&gs, n)?;
    let hs = h.on_grid(n);
    let w: WeightGrid = gs.iter().zip(&hs).map(|(gp, hp)| mass_velocity_weight(gp, hp)).collect();
    Ok(assemble_weighted(basis, &w, n))
}

/// `d g_ε / dε = β_ξ⊗β_ξ + w′(ε) g_ξ` on a grid, with
/// `w′ = (q/2) (s/√(1+s²) − 1)`, `s = εq/2`.
pub fn family_velocity_on_grid(family: &MetricFamily, epsilon: f64, n: usize) -> WeightGrid {
    let vt = &family.variation;
    let bb = SymTensor::square(&vt.beta_xi).on_grid(n);
    let gx = vt.g_xi.on_grid(n);
    let q = vt.q.on_grid(n);
    (0..n * n * n)
        .map(|p| {
            let s = 0.5 * epsilon * q[p];
            let wd = 0.5 * q[p] * (s / (1.0 + s * s).sqrt() - 1.0);
            [0, 1, 2].map(|i| [0, 1, 2].map(|j| bb[p][i][j] + wd * gx[p][i][j]))
        })
        .collect()
}

/// `M(ε)` for a member of the compatible family.
pub fn family_mass(family: &MetricFamily, epsilon: f64, basis: &FormBasis) -> Result<DMatrix<f64>> {
    assemble_mass(&family.member(epsilon)?, basis)
}

/// `dM/dε` at any `ε` of the compatible family.
pub fn family_mass_derivative(family: &MetricFamily, epsilon: f64, basis: &FormBasis) -> Result<DMatrix<f64>> {
    let g = family.member(epsilon)?;
    let n = mass_grid_size(basis, &g)
        .max(2 * (2 * basis.truncation as usize + 2 * family.variation.h.degree() as usize) + 2)
        .next_multiple_of(2);
    let gs = g.on_grid(n);
    check_positive(&gs, n)?;
    let vel = family_velocity_on_grid(family, epsilon, n);
    let w: WeightGrid = gs.iter().zip(&vel).map(|(gp, vp)| mass_velocity_weight(gp, vp)).collect();
    Ok(assemble_weighted(basis, &w, n))
}
