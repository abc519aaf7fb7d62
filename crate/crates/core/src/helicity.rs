//! Orthonormal bases of curl eigenspaces built from positive-helicity frames.
//!
//! For a representative wave vector `k` the frame is
//! `e₁(k) = k × a / |k × a|` (with `a = e₁`, or `a = e₂` when `k ∥ e₁`),
//! `e₂(k) = k̂ × e₁(k)` and `h₊(k) = (e₁ + i e₂)/√2`, which satisfies
//! `i k × h₊ = |k| h₊`. Setting `e₁(−k) = e₁(k)` gives `h₊(−k) = conj h₊(k)`,
//! so each `±k` pair yields two real eigenfields (coefficient `1/√2` and `i/√2`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::field::{SpectralVectorField, Vec3c};
use crate::lattice::{lattice_shell, WaveVector};

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

/// The positive-helicity polarization vector `h₊(k)` for a representative `k`.
pub fn helicity_vector(k: WaveVector) -> Vec3c {
    let a = if k.is_parallel_to(&WaveVector::unit(0)) { [0.0, 1.0, 0.0] } else { [1.0, 0.0, 0.0] };
    let kf = k.as_f64();
    let e1 = normalize(cross(kf, a));
    let e2 = cross(normalize(kf), e1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [0, 1, 2].map(|i| Complex64::new(e1[i] * s, e2[i] * s))
}

/// `N_λ` real fields spanning `{curl u = √n u}`, orthonormal in the
/// mean-square inner product `(2π)⁻³ ∫ u · v`.
pub fn helicity_basis(n: u32) -> Result<Vec<SpectralVectorField>> {
    let shell = lattice_shell(n);
    if shell.is_empty() || n == 0 {
        return Err(SpectralError::NoSuchEigenvalue { n });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(shell.multiplicity());
    for k in shell.representatives() {
        let h = helicity_vector(k);
        for phase in [Complex64::new(s, 0.0), Complex64::new(0.0, s)] {
            let mut u = SpectralVectorField::zero(k.inf_norm());
            u.set_pair(k, h.map(|c| c * phase));
            basis.push(u);
        }
    }
    Ok(basis)
}

/// Orthonormality and eigen-residual figures for one eigenfamily.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfamilyReport {
    pub n: u32,
    pub multiplicity: usize,
    /// `max |⟨u_i, u_j⟩ − δ_ij|`.
    pub gram_deviation: f64,
    /// `max_i max_k |curl(u_i)^(k) − √n û_i(k)|`.
    pub curl_residual: f64,
}

/// Checks a basis against a curl operator. The operator is a parameter so
/// that a deliberately broken curl can be shown to fail the check.
pub fn check_eigenfamily<F>(n: u32, basis: &[SpectralVectorField], curl: F) -> EigenfamilyReport
where
    F: Fn(&SpectralVectorField) -> SpectralVectorField,
{
    let lambda = f64::from(n).sqrt();
    let mut gram_deviation: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_deviation = gram_deviation.max((u.inner(v) - target).abs());
        }
    }
    let curl_residual = basis
        .iter()
        .map(|u| curl(u).max_coeff_diff(&u.scale(lambda)))
        .fold(0.0, f64::max);
    EigenfamilyReport { n, multiplicity: basis.len(), gram_deviation, curl_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{make_abc, AbcParams};

    #[test]
    fn unit_shell_basis_is_orthonormal_eigenfamily() {
        let basis = helicity_basis(1).unwrap();
        assert_eq!(basis.len(), 6);
        let r = check_eigenfamily(1, &basis, SpectralVectorField::curl);
        assert!(r.gram_deviation <= 1e-12, "{r:?}");
        assert!(r.curl_residual <= 1e-15, "{r:?}");
    }

    #[test]
    fn abc_lies_in_unit_shell_span() {
        // Least-squares projection onto an orthonormal basis is the inner-product expansion.
        let v = make_abc(AbcParams::new(1.0, 1.0, 1.0));
        let basis = helicity_basis(1).unwrap();
        let mut proj = SpectralVectorField::zero(1);
        for u in &basis {
            proj = proj.add_scaled(u, v.inner(u));
        }
        assert!((&v - &proj).l2_norm() < 1e-14);
    }

    #[test]
    fn empty_shell_is_rejected() {
        assert!(matches!(helicity_basis(7), Err(SpectralError::NoSuchEigenvalue { n: 7 })));
    }

    #[test]
    fn flipped_curl_fails_the_check() {
        let basis = helicity_basis(2).unwrap();
        let r = check_eigenfamily(2, &basis, |u| u.curl().scale(-1.0));
        assert!(r.curl_residual > 1.0);
    }

    #[test]
    fn frame_for_axis_aligned_vector() {
        let h = helicity_vector(WaveVector::unit(0));
        // k = e₁ uses a = e₂: e₁(k) = e₃, e₂(k) = e₁ × e₃ = −e₂.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h[2].re - s).abs() < 1e-16);
        assert!((h[1].im + s).abs() < 1e-16);
    }
}
