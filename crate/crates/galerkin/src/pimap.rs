//! Compression of a symmetric operator family `A(t)` to an eigencluster:
//! `π(t) = S^{-1/2} (Fᵀ A F) S^{-1/2}` with `F = P(t) U₀`, `S = FᵀF`, and
//! `U₀` an orthonormal basis of the cluster at `t₀`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{GalerkinError, Result};
use crate::pencil::inv_sqrt_spd;
use crate::projector::spectral_projector;

/// A `C¹` one-parameter family of symmetric matrices with its derivative.
pub trait OperatorFamily: Sync {
    fn operator(&self, t: f64) -> DMatrix<f64>;
    fn derivative(&self, t: f64) -> DMatrix<f64>;
}

/// `A(t) = Σ tⁱ Aᵢ`.
#[derive(Debug, Clone)]
pub struct PolynomialFamily {
    pub coefficients: Vec<DMatrix<f64>>,
}

impl OperatorFamily for PolynomialFamily {
    fn operator(&self, t: f64) -> DMatrix<f64> {
        let mut acc = self.coefficients[0].clone() * 0.0;
        for c in self.coefficients.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    fn derivative(&self, t: f64) -> DMatrix<f64> {
        let mut acc = self.coefficients[0].clone() * 0.0;
        for (i, c) in self.coefficients.iter().enumerate().skip(1).rev() {
            acc = acc * t + c * i as f64;
        }
        acc
    }
}

/// Contour circle and the expected cluster size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub center: f64,
    pub radius: f64,
    pub multiplicity: usize,
    pub nodes: usize,
}

/// Projector traces further than this from the cluster size signal leakage.
pub const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiMapReport {
    pub q: f64,
    pub q0: f64,
    pub projector: DMatrix<f64>,
    pub projector_trace: f64,
    /// `‖P² − P‖_max`.
    pub idempotency_defect: f64,
    pub pi: DMatrix<f64>,
    /// `U₀ᵀ A′(q₀) U₀`.
    pub pi_prime: DMatrix<f64>,
    /// Hausdorff distance between `σ(π(q))` and `σ(A_q)` inside the disk.
    pub sigma_match_defect: f64,
    /// `‖π − (tr π / k) I‖_F`.
    pub identity_deviation: f64,
}

fn projector_checked(a: &DMatrix<f64>, c: &ClusterSpec) -> Result<(DMatrix<f64>, f64)> {
    let p = spectral_projector(a, c.center, c.radius, c.nodes)?;
    let trace = p.trace();
    if (trace - c.multiplicity as f64).abs() > TRACE_TOL {
        return Err(GalerkinError::ClusterLeakage { trace, expected: c.multiplicity });
    }
    Ok((p, trace))
}

/// Orthonormal basis of the cluster range at `q₀`: the top `k` eigenvectors
/// of `P(q₀)`, each signed so its largest-magnitude entry is positive.
pub fn cluster_frame(family: &dyn OperatorFamily, q0: f64, cluster: &ClusterSpec) -> Result<DMatrix<f64>> {
    let (p, _) = projector_checked(&family.operator(q0), cluster)?;
    let eig = SymmetricEigen::new(p);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<_> = order[..cluster.multiplicity]
        .iter()
        .map(|&c| {
            let v = eig.eigenvectors.column(c).into_owned();
            let imax = v.iamax();
            if v[imax] < 0.0 {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok(DMatrix::from_columns(&cols))
}

/// `π(q)` relative to the frame `U₀`.
pub fn compress(a: &DMatrix<f64>, p: &DMatrix<f64>, u0: &DMatrix<f64>) -> DMatrix<f64> {
    let f = p * u0;
    let s = f.transpose() * &f;
    let x = inv_sqrt_spd(&s);
    let mut pi = &x * (f.transpose() * a * &f) * &x;
    let t = pi.transpose();
    pi = (pi + t) * 0.5;
    pi
}

/// One-sided Hausdorff distances combined; infinite if exactly one set is
/// empty.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |x: &[f64], y: &[f64]| x.iter().map(|p| y.iter().map(|q| (p - q).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    directed(a, b).max(directed(b, a))
}

pub fn pi_map(family: &dyn OperatorFamily, q: f64, q0: f64, cluster: &ClusterSpec) -> Result<PiMapReport> {
    let u0 = cluster_frame(family, q0, cluster)?;
    let a = family.operator(q);
    let (p, projector_trace) = projector_checked(&a, cluster)?;
    let pi = compress(&a, &p, &u0);
    let sigma_pi: Vec<f64> = pi.symmetric_eigenvalues().iter().copied().collect();
    let sigma_a: Vec<f64> =
        a.symmetric_eigenvalues().iter().copied().filter(|l| (l - cluster.center).abs() < cluster.radius).collect();
    let pi_prime = pi_derivative(&family.derivative(q0), &u0);
    Ok(PiMapReport {
        q,
        q0,
        idempotency_defect: (&p * &p - &p).amax(),
        projector: p,
        projector_trace,
        sigma_match_defect: hausdorff(&sigma_pi, &sigma_a),
        identity_deviation: splitting_certificate(&pi),
        pi,
        pi_prime,
    })
}

/// `π′ = Uᵀ DA U` for a frame `U` orthonormal in the reference inner product.
pub fn pi_derivative(da: &DMatrix<f64>, u: &DMatrix<f64>) -> DMatrix<f64> {
    u.transpose() * da * u
}

/// `‖π′ − (tr π′ / k) I‖_F`: zero exactly on multiples of the identity.
pub fn splitting_certificate(pi_prime: &DMatrix<f64>) -> f64 {
    let k = pi_prime.nrows();
    if k == 0 {
        return 0.0;
    }
    let mean = pi_prime.trace() / k as f64;
    (pi_prime - DMatrix::identity(k, k) * mean).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn diag_family() -> PolynomialFamily {
        PolynomialFamily {
            coefficients: vec![
                DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 5.0])),
                DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 0.0])),
            ],
        }
    }

    const CLUSTER: ClusterSpec = ClusterSpec { center: 1.0, radius: 0.5, multiplicity: 2, nodes: 64 };

    #[test]
    fn certificate_examples() {
        assert_eq!(splitting_certificate(&(DMatrix::identity(3, 3) * 3.0)), 0.0);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0]));
        assert!((splitting_certificate(&d) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_family_splits_exactly() {
        for t in [-0.2, 0.05, 0.3] {
            let r = pi_map(&diag_family(), t, 0.0, &CLUSTER).unwrap();
            let mut s: Vec<f64> = r.pi.symmetric_eigenvalues().iter().copied().collect();
            s.sort_by(f64::total_cmp);
            assert!((s[0] - (1.0 - t.abs())).abs() < 1e-12 && (s[1] - (1.0 + t.abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn base_point_gives_scalar_pi() {
        let r = pi_map(&diag_family(), 0.0, 0.0, &CLUSTER).unwrap();
        assert!((r.pi.clone() - DMatrix::identity(2, 2)).amax() < 1e-12);
        assert!(r.identity_deviation < 1e-12);
    }

    #[test]
    fn shift_family_has_identity_derivative() {
        let f = PolynomialFamily { coefficients: vec![diag_family().coefficients[0].clone(), DMatrix::identity(3, 3)] };
        let u = cluster_frame(&f, 0.0, &CLUSTER).unwrap();
        assert!((pi_derivative(&f.derivative(0.0), &u) - DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn leakage_detected() {
        let wrong = ClusterSpec { multiplicity: 3, ..CLUSTER };
        assert!(matches!(pi_map(&diag_family(), 0.1, 0.0, &wrong), Err(GalerkinError::ClusterLeakage { .. })));
    }

    #[test]
    fn hausdorff_basic() {
        assert_eq!(hausdorff(&[1.0, 2.0], &[1.0, 2.5]), 0.5);
        assert_eq!(hausdorff(&[], &[]), 0.0);
    }
}
