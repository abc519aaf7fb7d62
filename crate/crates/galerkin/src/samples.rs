//! Seeded random symmetric matrices with prescribed spectra, for exercising
//! the projector and the π map.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::pimap::{ClusterSpec, PolynomialFamily};
use crate::projector::DEFAULT_NODES;

pub fn random_orthogonal(d: usize, rng: &mut ChaCha20Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix column signs so the distribution is Haar.
    let signs = DVector::from_fn(d, |i, _| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 });
    q * DMatrix::from_diagonal(&signs)
}

/// Frobenius-normalized random symmetric matrix.
pub fn random_symmetric(d: usize, rng: &mut ChaCha20Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let s = &g + g.transpose();
    let n = s.norm();
    s / n
}

/// `Q diag(μ) Qᵀ` with `inside` eigenvalues within half the radius of the
/// center and the rest at least twice the radius away.
#[derive(Debug, Clone)]
pub struct ClusteredMatrix {
    pub a: DMatrix<f64>,
    pub center: f64,
    pub radius: f64,
    pub inside: usize,
}

pub fn clustered_symmetric(d: usize, seed: u64) -> ClusteredMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let center = rng.random_range(-5.0..5.0);
    let radius = rng.random_range(0.5..2.0);
    let inside = rng.random_range(1..=d.min(5));
    let spectrum: Vec<f64> = (0..d)
        .map(|i| {
            if i < inside {
                center + rng.random_range(-0.5..0.5) * radius
            } else {
                let off = rng.random_range(2.0 * radius..20.0);
                if rng.random_bool(0.5) {
                    center + off
                } else {
                    center - off
                }
            }
        })
        .collect();
    let q = random_orthogonal(d, &mut rng);
    let mut a = &q * DMatrix::from_diagonal(&DVector::from_vec(spectrum)) * q.transpose();
    let t = a.transpose();
    a = (a + t) * 0.5;
    ClusteredMatrix { a, center, radius, inside }
}

/// `A(t) = A₀ + t A₁ + t² A₂` where `A₀` has a `k`-fold eigenvalue `λ₀`
/// isolated by at least 2 from the rest, and `A₁`, `A₂` have unit
/// Frobenius norm.
pub fn clustered_family(d: usize, k: usize, seed: u64) -> (PolynomialFamily, ClusterSpec) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let lambda0 = rng.random_range(-3.0..3.0);
    let spectrum: Vec<f64> = (0..d)
        .map(|i| {
            if i < k {
                lambda0
            } else {
                let off = rng.random_range(2.0..10.0);
                if rng.random_bool(0.5) {
                    lambda0 + off
                } else {
                    lambda0 - off
                }
            }
        })
        .collect();
    let q = random_orthogonal(d, &mut rng);
    let mut a0 = &q * DMatrix::from_diagonal(&DVector::from_vec(spectrum)) * q.transpose();
    let t = a0.transpose();
    a0 = (a0 + t) * 0.5;
    let a1 = random_symmetric(d, &mut rng);
    let a2 = random_symmetric(d, &mut rng);
    (
        PolynomialFamily { coefficients: vec![a0, a1, a2] },
        ClusterSpec { center: lambda0, radius: 0.5, multiplicity: k, nodes: DEFAULT_NODES },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let q = random_orthogonal(7, &mut rng);
        assert!((q.transpose() * &q - DMatrix::identity(7, 7)).amax() < 1e-13);
    }

    #[test]
    fn cluster_count_is_respected() {
        let c = clustered_symmetric(30, 11);
        let n = c.a.symmetric_eigenvalues().iter().filter(|l| (*l - c.center).abs() < c.radius).count();
        assert_eq!(n, c.inside);
    }
}
