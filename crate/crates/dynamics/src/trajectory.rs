//! Streamlines `ẋ = v(x)` on T³ and the propagated tangent map.

use serde::{Deserialize, Serialize};

use beltrami_core::SpectralVectorField;

use crate::compiled::{wrap3, CompiledField};
use crate::dopri::{Dopri5, IntegratorStats};
use crate::error::{DynamicsError, Result};

/// Largest step the controller may take.
pub const DEFAULT_MAX_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    /// Position reduced to `[0, 2π)³`.
    pub x: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// One sample per accepted step, starting at `t = 0`.
    pub samples: Vec<TrajectorySample>,
    /// End point in the universal cover `ℝ³`.
    pub end_unwrapped: [f64; 3],
    pub stats: IntegratorStats,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn final_point(&self) -> [f64; 3] {
        wrap3(&self.end_unwrapped)
    }
}

fn check_args(t_final: f64, tol: f64) -> Result<()> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(DynamicsError::InvalidArgument(format!("T must be positive, got {t_final}")));
    }
    if !(tol > 0.0) {
        return Err(DynamicsError::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// Integrates from `x0` over `[0, T]` with local error per step at most `tol`.
pub fn integrate(v: &SpectralVectorField, x0: [f64; 3], t_final: f64, tol: f64) -> Result<Trajectory> {
    integrate_compiled(&CompiledField::new(v), x0, t_final, tol)
}

pub fn integrate_compiled(f: &CompiledField, x0: [f64; 3], t_final: f64, tol: f64) -> Result<Trajectory> {
    check_args(t_final, tol)?;
    let mut s = Dopri5::new(|x: &[f64; 3]| f.value(x), x0, tol, DEFAULT_MAX_STEP)?;
    let mut samples = vec![TrajectorySample { t: 0.0, x: wrap3(&x0) }];
    while s.time() < t_final {
        let st = s.step(t_final)?;
        samples.push(TrajectorySample { t: st.t1, x: wrap3(&st.y1) });
    }
    Ok(Trajectory { samples, end_unwrapped: *s.state(), stats: s.stats() })
}

/// The flow's derivative `Dφ_T(x0)`, obtained by integrating
/// `Ṁ = J(x) M` with `M(0) = I` alongside the trajectory.
pub fn tangent_map(v: &SpectralVectorField, x0: [f64; 3], t_final: f64, tol: f64) -> Result<[[f64; 3]; 3]> {
    check_args(t_final, tol)?;
    let f = CompiledField::new(v);
    let rhs = |y: &[f64; 12]| {
        let (val, jac) = f.value_and_jacobian(&[y[0], y[1], y[2]]);
        let mut out = [0.0; 12];
        out[..3].copy_from_slice(&val);
        for i in 0..3 {
            for j in 0..3 {
                out[3 + 3 * i + j] = (0..3).map(|l| jac[i][l] * y[3 + 3 * l + j]).sum();
            }
        }
        out
    };
    let mut y0 = [0.0; 12];
    y0[..3].copy_from_slice(&x0);
    y0[3] = 1.0;
    y0[7] = 1.0;
    y0[11] = 1.0;
    let mut s = Dopri5::new(rhs, y0, tol, DEFAULT_MAX_STEP)?;
    while s.time() < t_final {
        s.step(t_final)?;
    }
    let y = s.state();
    Ok([[y[3], y[4], y[5]], [y[6], y[7], y[8]], [y[9], y[10], y[11]]])
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}
