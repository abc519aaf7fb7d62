use beltrami_galerkin::samples::{clustered_family, clustered_symmetric};
use beltrami_galerkin::{cluster_frame, pi_derivative, pi_map, spectral_projector, OperatorFamily, DEFAULT_NODES};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn eigen_projector(a: &DMatrix<f64>, center: f64, radius: f64) -> DMatrix<f64> {
    let e = SymmetricEigen::new(a.clone());
    let mut p = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, l) in e.eigenvalues.iter().enumerate() {
        if (l - center).abs() < radius {
            let v = e.eigenvectors.column(i);
            p += v * v.transpose();
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn projector_matches_eigendecomposition(seed in 0u64..1_000_000, d in 2usize..60) {
        let c = clustered_symmetric(d, seed);
        let p = spectral_projector(&c.a, c.center, c.radius, DEFAULT_NODES).unwrap();
        let oracle = eigen_projector(&c.a, c.center, c.radius);
        prop_assert!((&p - &oracle).amax() <= 1e-8);
        prop_assert!((&p * &p - &p).amax() <= 1e-10);
        prop_assert!((&p * &c.a - &c.a * &p).amax() <= 1e-10 * c.a.amax().max(1.0));
        prop_assert!((p.trace() - c.inside as f64).abs() <= 1e-8);
    }

    #[test]
    fn pi_spectrum_matches_cluster(seed in 0u64..1_000_000, t in -0.1f64..0.1) {
        let (fam, cluster) = clustered_family(24, 3, seed);
        let r = pi_map(&fam, t, 0.0, &cluster).unwrap();
        prop_assert!(r.sigma_match_defect <= 1e-9, "{}", r.sigma_match_defect);
        prop_assert!((&r.pi - r.pi.transpose()).amax() <= 1e-12);
    }
}

#[test]
fn pi_derivative_matches_richardson_difference() {
    for seed in 0..5 {
        let (fam, cluster) = clustered_family(20, 3, seed);
        let u0 = cluster_frame(&fam, 0.0, &cluster).unwrap();
        let exact = pi_derivative(&fam.derivative(0.0), &u0);
        let pi = |t: f64| pi_map(&fam, t, 0.0, &cluster).unwrap().pi;
        let central = |h: f64| (pi(h) - pi(-h)) / (2.0 * h);
        let h = 1e-2;
        let rich = (central(0.5 * h) * 4.0 - central(h)) / 3.0;
        let rel = (rich - &exact).amax() / exact.amax();
        assert!(rel <= 1e-6, "seed {seed}: {rel:e}");
    }
}

#[test]
fn projector_commutes_and_is_idempotent_on_family() {
    let (fam, cluster) = clustered_family(16, 2, 9);
    let a = fam.operator(0.07);
    let p = spectral_projector(&a, cluster.center, cluster.radius, cluster.nodes).unwrap();
    assert!((&p * &a * &p - &a * &p).amax() < 1e-10);
}
