//! Largest Lyapunov exponent by tangent-vector propagation with periodic
//! renormalization (Benettin's method). It is used as a numerical proxy for
//! positive topological entropy; no entropy is computed.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use beltrami_core::{AbcParams, SpectralVectorField};

use crate::compiled::CompiledField;
use crate::dopri::{Dopri5, IntegratorStats};
use crate::error::{DynamicsError, Result};
use crate::trajectory::DEFAULT_MAX_STEP;

/// Local error tolerance used by [`lyapunov_max`].
pub const DEFAULT_LYAPUNOV_TOL: f64 = 1e-9;

/// Chaos threshold θ for `(A, B, C) = (1, 0.5, 0.1)`: half the median of the
/// positive estimates over the 20 [`standard_chaos_seeds`] at `T = 10⁵`,
/// `renorm = 1`, tolerance [`DEFAULT_LYAPUNOV_TOL`]. Regenerate with
/// `cargo run --release -p beltrami-dynamics --example calibrate_theta`.
///
/// Sixteen of the twenty seeds lie on regular tori and their finite-time
/// estimates (about 1e-4) set the median, so θ is small. The four chaotic
/// seeds give 0.035 to 0.047.
pub const CHAOS_THRESHOLD: f64 = 5.446026e-5;

/// Upper bound for finite-time estimates of the integrable `C = 0` flows
/// at `T = 10⁴`.
pub const INTEGRABLE_CEILING: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub t: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub lambda_max: f64,
    /// Running estimate after each renormalization.
    pub history: Vec<HistoryPoint>,
    pub renorm_interval: f64,
    /// Half-width of the band around `lambda_max` containing the last 10 %
    /// of the history.
    pub tail_band: f64,
    pub stats: IntegratorStats,
}

pub fn lyapunov_max(v: &SpectralVectorField, x0: [f64; 3], t_final: f64, renorm: f64) -> Result<LyapunovEstimate> {
    lyapunov_max_with_tol(v, x0, t_final, renorm, DEFAULT_LYAPUNOV_TOL)
}

pub fn lyapunov_max_with_tol(
    v: &SpectralVectorField,
    x0: [f64; 3],
    t_final: f64,
    renorm: f64,
    tol: f64,
) -> Result<LyapunovEstimate> {
    if !(renorm > 0.0) || !(t_final >= renorm) {
        return Err(DynamicsError::InvalidArgument(format!("need T ≥ renorm > 0, got T = {t_final}, renorm = {renorm}")));
    }
    let f = CompiledField::new(v);
    let rhs = |y: &[f64; 6]| {
        let (val, jac) = f.value_and_jacobian(&[y[0], y[1], y[2]]);
        let mut out = [0.0; 6];
        out[..3].copy_from_slice(&val);
        for i in 0..3 {
            out[3 + i] = jac[i][0] * y[3] + jac[i][1] * y[4] + jac[i][2] * y[5];
        }
        out
    };
    let w = 1.0 / 3f64.sqrt();
    let mut s = Dopri5::new(rhs, [x0[0], x0[1], x0[2], w, w, w], tol, DEFAULT_MAX_STEP)?;
    let intervals = (t_final / renorm).floor() as usize;
    let mut log_sum = 0.0;
    let mut history = Vec::with_capacity(intervals);
    for k in 1..=intervals {
        let t_next = renorm * k as f64;
        while s.time() < t_next {
            s.step(t_next)?;
        }
        let y = *s.state();
        let norm = (y[3] * y[3] + y[4] * y[4] + y[5] * y[5]).sqrt();
        log_sum += norm.ln();
        history.push(HistoryPoint { t: t_next, estimate: log_sum / t_next });
        s.reset_state([y[0], y[1], y[2], y[3] / norm, y[4] / norm, y[5] / norm]);
    }
    let lambda_max = history.last().map_or(0.0, |h| h.estimate);
    let tail = (history.len() / 10).max(1);
    let tail_band = history[history.len() - tail..].iter().map(|h| (h.estimate - lambda_max).abs()).fold(0.0, f64::max);
    Ok(LyapunovEstimate { lambda_max, history, renorm_interval: renorm, tail_band, stats: s.stats() })
}

/// `count` starting points just off the separatrix `H = A − B` of the
/// `C = 0` first integral `H = A cos x₃ + B sin x₁`: `x₁` equally spaced,
/// `x₂ = 0`, and `x₃` solving `H = A − B` shifted by `offset`.
pub fn separatrix_seeds(p: AbcParams, count: usize, offset: f64) -> Vec<[f64; 3]> {
    (0..count)
        .map(|j| {
            let x1 = TAU * (j as f64 + 0.5) / count as f64;
            let c = ((p.a - p.b - p.b * x1.sin()) / p.a).clamp(-1.0, 1.0);
            [x1, 0.0, c.acos() + offset]
        })
        .collect()
}

/// The 20 seeds used for calibration and for the chaos check.
pub fn standard_chaos_seeds() -> Vec<[f64; 3]> {
    separatrix_seeds(AbcParams::new(1.0, 0.5, 0.1), 20, 1e-3)
}

/// Uniform point of `[0, 2π)³` drawn from a ChaCha stream keyed by `seed`.
pub fn uniform_seed_point(seed: u64) -> [f64; 3] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    [0; 3].map(|_| rng.random_range(0.0..TAU))
}

/// Half the median of the strictly positive entries, or `None` if there
/// are none.
pub fn threshold_from_estimates(estimates: &[f64]) -> Option<f64> {
    let mut pos: Vec<f64> = estimates.iter().copied().filter(|&x| x > 0.0).collect();
    if pos.is_empty() {
        return None;
    }
    pos.sort_by(f64::total_cmp);
    let m = pos.len();
    let median = if m % 2 == 1 { pos[m / 2] } else { 0.5 * (pos[m / 2 - 1] + pos[m / 2]) };
    Some(0.5 * median)
}

#[cfg(test)]
mod tests {
    use super::*;
    use beltrami_core::make_abc;

    #[test]
    fn shear_flow_has_no_exponential_growth() {
        let v = make_abc(AbcParams::new(1.0, 0.0, 0.0));
        let est = lyapunov_max(&v, [0.1, 0.2, 0.3], 1000.0, 1.0).unwrap();
        assert!(est.lambda_max.abs() <= 1e-2, "{}", est.lambda_max);
        assert_eq!(est.history.len(), 1000);
    }

    #[test]
    fn seeds_lie_near_separatrix() {
        let p = AbcParams::new(1.0, 0.5, 0.0);
        for x in separatrix_seeds(p, 20, 0.0) {
            assert!((x[2].cos() + 0.5 * x[0].sin() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn threshold_is_half_median() {
        assert_eq!(threshold_from_estimates(&[-1.0, 0.2, 0.4, 0.1]), Some(0.1));
        assert_eq!(threshold_from_estimates(&[0.1, 0.3]), Some(0.1));
        assert_eq!(threshold_from_estimates(&[-0.1]), None);
    }

    #[test]
    fn bad_intervals_are_rejected() {
        let v = make_abc(AbcParams::new(1.0, 0.0, 0.0));
        assert!(lyapunov_max(&v, [0.0; 3], 1.0, 0.0).is_err());
        assert!(lyapunov_max(&v, [0.0; 3], 0.5, 1.0).is_err());
    }
}
