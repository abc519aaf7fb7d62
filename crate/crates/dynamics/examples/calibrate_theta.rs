//! Recomputes the chaos threshold θ stored in `CHAOS_THRESHOLD`.
//!
//! Runs the 20 standard seeds for ABC(1, 0.5, 0.1) to T = 10⁵ with
//! renormalization interval 1 and prints every estimate and θ.

use beltrami_core::{make_abc, AbcParams};
use beltrami_dynamics::{lyapunov_max, standard_chaos_seeds, threshold_from_estimates};

fn main() {
    let t_final: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e5);
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
    let mut estimates = Vec::new();
    for (j, x0) in standard_chaos_seeds().into_iter().enumerate() {
        let est = lyapunov_max(&v, x0, t_final, 1.0).expect("integration failed");
        println!("seed {j:2}  x0 = [{:.6}, {:.6}, {:.6}]  lambda = {:.6e}", x0[0], x0[1], x0[2], est.lambda_max);
        estimates.push(est.lambda_max);
    }
    match threshold_from_estimates(&estimates) {
        Some(theta) => println!("theta = {theta:.6e}"),
        None => println!("no positive estimates"),
    }
}
