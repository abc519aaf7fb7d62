use std::f64::consts::TAU;

use beltrami_core::{make_abc, random_beltrami, AbcParams};
use beltrami_dynamics::{
    det3, integrate, lyapunov_max, poincare, standard_chaos_seeds, tangent_map, uniform_seed_point, CrossingDirection,
    SectionOptions, SectionPlane, INTEGRABLE_CEILING,
};
use proptest::prelude::*;

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn c0_first_integral_is_conserved() {
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.0));
    let x0 = [0.3, 1.2, 2.1];
    let h = |x: &[f64; 3]| x[2].cos() + 0.5 * x[0].sin();
    let tr = integrate(&v, x0, 1000.0, 1e-12).unwrap();
    let worst = tr.samples.iter().map(|s| (h(&s.x) - h(&x0)).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn forward_then_backward_returns_home() {
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
    let x0 = [0.3, 1.2, 2.1];
    let fwd = integrate(&v, x0, 20.0, 1e-12).unwrap();
    let back = integrate(&v.scale(-1.0), fwd.end_unwrapped, 20.0, 1e-12).unwrap();
    for i in 0..3 {
        assert!(circle_dist(back.end_unwrapped[i], x0[i]) <= 1e-7);
    }
}

#[test]
fn tangent_map_preserves_volume() {
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
    let m = tangent_map(&v, [0.3, 1.2, 2.1], 1000.0, 1e-10).unwrap();
    assert!((det3(&m) - 1.0).abs() <= 1e-6, "{}", det3(&m));
}

#[test]
fn section_points_lie_on_the_level() {
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
    let sec = poincare(&v, SectionPlane::DEFAULT, CrossingDirection::Positive, standard_chaos_seeds()[14], 200, SectionOptions::for_crossings(200)).unwrap();
    assert!(sec.level_residual() <= 1e-9, "{}", sec.level_residual());
    assert!(sec.crossings.iter().all(|c| c.normal_velocity > 0.0));
    assert!(sec.crossings.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn chaotic_section_fills_an_area() {
    let seed = standard_chaos_seeds()[14];
    let n = 2000;
    let count = |c: f64| {
        let v = make_abc(AbcParams::new(1.0, 0.5, c));
        poincare(&v, SectionPlane::DEFAULT, CrossingDirection::Positive, seed, n, SectionOptions::for_crossings(n)).unwrap().occupancy(64)
    };
    let (regular, chaotic) = (count(0.0), count(0.1));
    assert!(chaotic > 5 * regular, "chaotic {chaotic}, regular {regular}");
}

#[test]
fn integrable_flows_have_small_exponents() {
    for (j, b) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let v = make_abc(AbcParams::new(1.0, b, 0.0));
        let est = lyapunov_max(&v, uniform_seed_point(j as u64), 1e4, 1.0).unwrap();
        assert!(est.lambda_max <= INTEGRABLE_CEILING, "B = {b}: {}", est.lambda_max);
        assert!(est.history.len() == 10_000);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_beltrami_flows_preserve_volume(seed in 0u64..10_000, n in prop::sample::select(vec![1u32, 2, 3])) {
        let v = random_beltrami(n, seed).unwrap();
        let m = tangent_map(&v, uniform_seed_point(seed), 50.0, 1e-10).unwrap();
        // Evaluating det loses digits in proportion to the Hadamard bound
        // once the map stretches strongly.
        let hadamard: f64 = (0..3).map(|j| (0..3).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt()).product();
        prop_assert!((det3(&m) - 1.0).abs() <= 1e-6 + 1e-13 * hadamard, "det {} hadamard {hadamard:e}", det3(&m));
    }
}
