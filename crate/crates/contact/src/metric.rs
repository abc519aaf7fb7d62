//! Riemannian metrics `g = Σ w_t(x) T_t(x)` on T³ with trig-polynomial
//! tensors `T_t` and scalar weights `w_t` that are either constants or the
//! stretch factor of the compatible perturbation family.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::trig::{SymTensor, TrigPoly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Weight {
    Constant { value: f64 },
    /// `√(1 + ε² q²/4) − ε q/2 − 1`.
    Stretch { epsilon: f64, q: TrigPoly },
}

impl Weight {
    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        match self {
            Weight::Constant { value } => *value,
            Weight::Stretch { epsilon, q } => stretch(*epsilon, q.eval(x)),
        }
    }

    fn on_grid(&self, n: usize) -> Vec<f64> {
        match self {
            Weight::Constant { value } => vec![*value; n * n * n],
            Weight::Stretch { epsilon, q } => q.on_grid(n).into_iter().map(|qv| stretch(*epsilon, qv)).collect(),
        }
    }
}

/// `√(1 + ε²q²/4) − εq/2 − 1`, written to avoid cancellation for small `εq`.
pub fn stretch(epsilon: f64, q: f64) -> f64 {
    let s = 0.5 * epsilon * q;
    // √(1+s²) − 1 = s² / (√(1+s²) + 1)
    s * s / ((1.0 + s * s).sqrt() + 1.0) - s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricTerm {
    pub weight: Weight,
    pub tensor: SymTensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricField {
    pub terms: Vec<MetricTerm>,
}

pub fn to_matrix(m: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[i][j])
}

impl MetricField {
    pub fn from_tensor(t: SymTensor) -> Self {
        MetricField { terms: vec![MetricTerm { weight: Weight::Constant { value: 1.0 }, tensor: t }] }
    }

    /// The Euclidean metric `δ_ij`.
    pub fn flat() -> Self {
        Self::from_tensor(SymTensor::identity())
    }

    pub fn constant(m: [[f64; 3]; 3]) -> Self {
        Self::from_tensor(SymTensor::constant(m))
    }

    pub fn scale(&self, s: f64) -> Self {
        MetricField { terms: self.terms.iter().map(|t| MetricTerm { weight: t.weight.clone(), tensor: t.tensor.scale(s) }).collect() }
    }

    pub fn eval(&self, x: &[f64; 3]) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for t in &self.terms {
            let w = t.weight.eval(x);
            let v = t.tensor.eval(x);
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += w * v[i][j];
                }
            }
        }
        m
    }

    pub fn on_grid(&self, n: usize) -> Vec<[[f64; 3]; 3]> {
        let mut out = vec![[[0.0; 3]; 3]; n * n * n];
        for t in &self.terms {
            let w = t.weight.on_grid(n);
            let v = t.tensor.on_grid(n);
            for p in 0..out.len() {
                for i in 0..3 {
                    for j in 0..3 {
                        out[p][i][j] += w[p] * v[p][i][j];
                    }
                }
            }
        }
        out
    }

    /// The metric as a single polynomial tensor, if every weight is constant.
    pub fn as_polynomial(&self) -> Option<SymTensor> {
        let mut acc = SymTensor::zero();
        for t in &self.terms {
            match t.weight {
                Weight::Constant { value } => acc = &acc + &t.tensor.scale(value),
                Weight::Stretch { .. } => return None,
            }
        }
        Some(acc)
    }

    pub fn as_constant(&self) -> Option<[[f64; 3]; 3]> {
        self.as_polynomial()?.as_constant()
    }

    /// Largest trig degree of any tensor or weight argument.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| {
                let w = match &t.weight {
                    Weight::Constant { .. } => 0,
                    Weight::Stretch { q, .. } => q.degree(),
                };
                w.max(t.tensor.degree())
            })
            .max()
            .unwrap_or(0)
    }

    /// Smallest eigenvalue of `g` over the grid and where it occurs.
    pub fn min_eigenvalue(&self, n: usize) -> (f64, [f64; 3]) {
        let mut best = (f64::INFINITY, [0.0; 3]);
        for (p, m) in self.on_grid(n).iter().enumerate() {
            let e = to_matrix(m).symmetric_eigenvalues().min();
            if e < best.0 || e.is_nan() {
                best = (e, beltrami_core::grid::grid_point(p, n));
            }
        }
        best
    }
}
