//! Dormand–Prince 5(4) pair with FSAL and the standard quartic-in-θ dense
//! output, for autonomous systems on `ℝ^D`.
//!
//! The local error is controlled in the max norm against an absolute
//! tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub tol: f64,
}

fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += c * k[i];
        }
    }
    out
}

struct Stages<const D: usize> {
    k: [[f64; D]; 7],
    y1: [f64; D],
}

fn stages<const D: usize, F: Fn(&[f64; D]) -> [f64; D]>(f: &F, y: &[f64; D], k1: &[f64; D], h: f64) -> Stages<D> {
    let k2 = f(&axpy(y, &[(h * A21, k1)]));
    let k3 = f(&axpy(y, &[(h * A31, k1), (h * A32, &k2)]));
    let k4 = f(&axpy(y, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]));
    let k5 = f(&axpy(y, &[(h * A51, k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]));
    let k6 = f(&axpy(y, &[(h * A61, k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)]));
    let y1 = axpy(y, &[(h * A71, k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)]);
    let k7 = f(&y1);
    Stages { k: [*k1, k2, k3, k4, k5, k6, k7], y1 }
}

/// One uncontrolled fifth-order step of size `h` (any sign).
pub fn rk_step<const D: usize, F: Fn(&[f64; D]) -> [f64; D]>(f: &F, y: &[f64; D], h: f64) -> [f64; D] {
    let k1 = f(y);
    stages(f, y, &k1, h).y1
}

/// An accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct DenseStep<const D: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; D],
    pub y1: [f64; D],
    rc: [[f64; D]; 3],
}

impl<const D: usize> DenseStep<D> {
    /// State at `t ∈ [t0, t1]`.
    pub fn eval(&self, t: f64) -> [f64; D] {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        let mut out = [0.0; D];
        for i in 0..D {
            let diff = self.y1[i] - self.y0[i];
            out[i] = self.y0[i] + th * (diff + th1 * (self.rc[0][i] + th * (self.rc[1][i] + th1 * self.rc[2][i])));
        }
        out
    }
}

/// Adaptive integrator state.
pub struct Dopri5<const D: usize, F> {
    f: F,
    tol: f64,
    h_max: f64,
    t: f64,
    y: [f64; D],
    k1: [f64; D],
    h: f64,
    stats: IntegratorStats,
}

impl<const D: usize, F: Fn(&[f64; D]) -> [f64; D]> Dopri5<D, F> {
    pub fn new(f: F, y0: [f64; D], tol: f64, h_max: f64) -> Result<Self> {
        if !(tol > 0.0) || !(h_max > 0.0) {
            return Err(DynamicsError::InvalidArgument(format!("tol = {tol}, h_max = {h_max}")));
        }
        let k1 = f(&y0);
        let mut s = Dopri5 { f, tol, h_max, t: 0.0, y: y0, k1, h: 0.0, stats: IntegratorStats { tol, evaluations: 1, ..Default::default() } };
        s.h = s.initial_step();
        Ok(s)
    }

    fn initial_step(&mut self) -> f64 {
        let norm = |v: &[f64; D]| v.iter().fold(0.0f64, |m, x| m.max(x.abs())) / self.tol;
        let d0 = norm(&self.y);
        let d1 = norm(&self.k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.h_max);
        let y1 = axpy(&self.y, &[(h0, &self.k1)]);
        let f1 = (self.f)(&y1);
        self.stats.evaluations += 1;
        let mut d2: f64 = 0.0;
        for i in 0..D {
            d2 = d2.max((f1[i] - self.k1[i]).abs());
        }
        let d2 = d2 / self.tol / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1).min(self.h_max)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[f64; D] {
        &self.y
    }

    pub fn stats(&self) -> IntegratorStats {
        self.stats
    }

    /// Replaces the state at the current time (e.g. after renormalizing a
    /// tangent vector).
    pub fn reset_state(&mut self, y: [f64; D]) {
        self.y = y;
        self.k1 = (self.f)(&y);
        self.stats.evaluations += 1;
    }

    /// Takes one accepted step, never past `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<DenseStep<D>> {
        let mut reject_streak = false;
        loop {
            let remaining = t_end - self.t;
            let mut h = self.h.min(self.h_max);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(DynamicsError::StepSizeUnderflow { t: self.t, h });
            }
            let s = stages(&self.f, &self.y, &self.k1, h);
            self.stats.evaluations += 6;
            let k = &s.k;
            let mut err: f64 = 0.0;
            for i in 0..D {
                let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
                err = err.max(e.abs());
            }
            let err = err / self.tol;
            if !err.is_finite() {
                self.h = h * 0.2;
                self.stats.rejected += 1;
                reject_streak = true;
                continue;
            }
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            if err <= 1.0 {
                let mut rc = [[0.0; D]; 3];
                for i in 0..D {
                    let diff = s.y1[i] - self.y[i];
                    let bspl = h * k[0][i] - diff;
                    rc[0][i] = bspl;
                    rc[1][i] = diff - h * k[6][i] - bspl;
                    rc[2][i] = h * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
                }
                let t0 = self.t;
                let t1 = if last { t_end } else { self.t + h };
                let step = DenseStep { t0, t1, y0: self.y, y1: s.y1, rc };
                self.t = t1;
                self.y = s.y1;
                self.k1 = k[6];
                self.stats.steps += 1;
                let grow = if reject_streak { fac.min(1.0) } else { fac };
                if !last || h * grow > self.h {
                    self.h = h * grow;
                }
                return Ok(step);
            }
            self.stats.rejected += 1;
            reject_streak = true;
            self.h = h * fac.min(1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let mut s = Dopri5::new(|y: &[f64; 1]| [y[0]], [1.0], 1e-12, 0.5).unwrap();
        while s.time() < 2.0 {
            s.step(2.0).unwrap();
        }
        assert_eq!(s.time(), 2.0);
        assert!((s.state()[0] - 2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        // Harmonic oscillator with exact solution (cos t, −sin t).
        let f = |y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Dopri5::new(f, [1.0, 0.0], 1e-10, 0.5).unwrap();
        let mut worst: f64 = 0.0;
        while s.time() < 10.0 {
            let st = s.step(10.0).unwrap();
            for j in 1..10 {
                let t = st.t0 + (st.t1 - st.t0) * f64::from(j) / 10.0;
                let y = st.eval(t);
                worst = worst.max((y[0] - t.cos()).abs()).max((y[1] + t.sin()).abs());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn fixed_step_is_fifth_order() {
        let f = |y: &[f64; 1]| [-y[0]];
        let e1 = (rk_step(&f, &[1.0], 0.1)[0] - (-0.1f64).exp()).abs();
        let e2 = (rk_step(&f, &[1.0], 0.05)[0] - (-0.05f64).exp()).abs();
        let order = (e1 / e2).log2();
        assert!(order > 5.5, "local order {order}");
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(Dopri5::new(|y: &[f64; 1]| *y, [1.0], 0.0, 1.0).is_err());
    }
}
