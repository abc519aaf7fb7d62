//! Poincaré sections `{x_a = c}` of streamlines.
//!
//! Crossings of the lifted levels `c + 2πm` are bracketed by accepted
//! steps, located by bisection on the dense output, then polished with
//! Newton iterations in time that take direct Runge–Kutta steps from the
//! start of the bracketing step.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use beltrami_core::SpectralVectorField;

use crate::compiled::{wrap, wrap3, CompiledField};
use crate::dopri::{rk_step, DenseStep, Dopri5};
use crate::error::{DynamicsError, Result};
use crate::trajectory::DEFAULT_MAX_STEP;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPlane {
    pub axis: usize,
    pub level: f64,
}

impl SectionPlane {
    /// `x₃ = π/2`.
    pub const DEFAULT: SectionPlane = SectionPlane { axis: 2, level: FRAC_PI_2 };

    /// The two coordinates kept on the section, in increasing order.
    pub fn kept_axes(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingDirection {
    Positive,
    Negative,
    Both,
}

impl CrossingDirection {
    fn accepts(self, velocity: f64) -> bool {
        match self {
            CrossingDirection::Positive => velocity > 0.0,
            CrossingDirection::Negative => velocity < 0.0,
            CrossingDirection::Both => velocity != 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionOptions {
    pub tol: f64,
    /// Integration time after which the search gives up.
    pub time_budget: f64,
}

impl SectionOptions {
    pub fn for_crossings(n: usize) -> Self {
        SectionOptions { tol: 1e-10, time_budget: 1000.0 + 200.0 * n as f64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    /// Full position reduced to `[0, 2π)³`.
    pub x: [f64; 3],
    /// Velocity component normal to the section.
    pub normal_velocity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareSection {
    pub plane: SectionPlane,
    pub direction: CrossingDirection,
    pub crossings: Vec<Crossing>,
}

impl PoincareSection {
    /// The two kept coordinates of each crossing.
    pub fn points(&self) -> Vec<[f64; 2]> {
        let [a, b] = self.plane.kept_axes();
        self.crossings.iter().map(|c| [c.x[a], c.x[b]]).collect()
    }

    /// Largest distance of a crossing's section coordinate from the level
    /// on the circle.
    pub fn level_residual(&self) -> f64 {
        self.crossings
            .iter()
            .map(|c| {
                let d = wrap(c.x[self.plane.axis] - self.plane.level);
                d.min(TAU - d)
            })
            .fold(0.0, f64::max)
    }

    /// Number of occupied cells in a `bins × bins` partition of the section.
    pub fn occupancy(&self, bins: usize) -> usize {
        let mut cells = std::collections::BTreeSet::new();
        for p in self.points() {
            let idx = p.map(|c| ((c / TAU * bins as f64) as usize).min(bins - 1));
            cells.insert(idx);
        }
        cells.len()
    }
}

fn polish(f: &CompiledField, step: &DenseStep<3>, axis: usize, target: f64, t_guess: f64) -> (f64, [f64; 3]) {
    let rhs = |x: &[f64; 3]| f.value(x);
    let mut t = t_guess;
    let mut x = rk_step(&rhs, &step.y0, t - step.t0);
    for _ in 0..4 {
        let g = x[axis] - target;
        if g.abs() <= 1e-13 {
            break;
        }
        let dt = -g / f.value(&x)[axis];
        t += dt;
        x = rk_step(&rhs, &x, dt);
    }
    (t, x)
}

/// Collects `n` crossings of `plane` in the given direction.
pub fn poincare(
    v: &SpectralVectorField,
    plane: SectionPlane,
    direction: CrossingDirection,
    x0: [f64; 3],
    n: usize,
    opts: SectionOptions,
) -> Result<PoincareSection> {
    if n == 0 {
        return Err(DynamicsError::InvalidArgument("at least one crossing must be requested".into()));
    }
    if plane.axis > 2 {
        return Err(DynamicsError::InvalidArgument(format!("axis {} out of range", plane.axis)));
    }
    let f = CompiledField::new(v);
    let axis = plane.axis;
    let mut s = Dopri5::new(|x: &[f64; 3]| f.value(x), x0, opts.tol, DEFAULT_MAX_STEP)?;
    let mut crossings = Vec::with_capacity(n);
    while crossings.len() < n && s.time() < opts.time_budget {
        let st = s.step(opts.time_budget)?;
        let (a, b) = (st.y0[axis], st.y1[axis]);
        let (lo, hi) = (a.min(b), a.max(b));
        let m_lo = ((lo - plane.level) / TAU).ceil() as i64;
        let m_hi = ((hi - plane.level) / TAU).floor() as i64;
        let mut levels: Vec<f64> = (m_lo..=m_hi).map(|m| plane.level + TAU * m as f64).collect();
        if b < a {
            levels.reverse();
        }
        for target in levels {
            // A crossing exactly at the step start belongs to the previous step.
            if a == target {
                continue;
            }
            let g = |t: f64| st.eval(t)[axis] - target;
            let (mut tl, mut tr) = (st.t0, st.t1);
            let gl = g(tl);
            for _ in 0..100 {
                let tm = 0.5 * (tl + tr);
                let gm = g(tm);
                if gm.abs() <= 1e-12 {
                    (tl, tr) = (tm, tm);
                    break;
                }
                if (gm > 0.0) == (gl > 0.0) {
                    tl = tm;
                } else {
                    tr = tm;
                }
            }
            let (t, x) = polish(&f, &st, axis, target, 0.5 * (tl + tr));
            let normal_velocity = f.value(&x)[axis];
            if direction.accepts(normal_velocity) && crossings.len() < n {
                crossings.push(Crossing { t, x: wrap3(&x), normal_velocity });
            }
        }
    }
    if crossings.is_empty() {
        return Err(DynamicsError::NoCrossings { budget: opts.time_budget });
    }
    if crossings.len() < n {
        return Err(DynamicsError::BudgetExhausted { found: crossings.len(), requested: n });
    }
    Ok(PoincareSection { plane, direction, crossings })
}
