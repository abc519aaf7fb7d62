//! The compatible perturbation family of a contact metric and its
//! linearization.
//!
//! For a 1-form `β` with `ξ`-part `β_ξ = β − β(R) α`, `q = |β_ξ|²_g` and
//! `g_ξ = g − α⊗α`,
//!
//! ```text
//! g_ε = g + ε β_ξ⊗β_ξ + (√(1 + ε²q²/4) − εq/2 − 1) g_ξ
//! h   = d/dε g_ε |₀ = β_ξ⊗β_ξ − ½ q g_ξ.
//! ```
//!
//! On `ξ` the family scales the `β_ξ` direction by `√(1+ε²q²/4) + εq/2` and
//! its `g`-orthogonal complement by the reciprocal, so `det g_ε = det g`,
//! `α` stays `g_ε`-unit and `R` stays `g_ε`-orthogonal to `ξ`.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use beltrami_core::SpectralVectorField;

use crate::contact::{ContactForm, DEFAULT_CHECK_GRID};
use crate::error::{ContactError, Result};
use crate::metric::{to_matrix, MetricField, MetricTerm, Weight};
use crate::trig::{OneForm, SymTensor, TrigPoly};

/// `β_ξ = β − β(R) α`. It annihilates `R` because `α(R) = 1`.
pub fn xi_projection(beta: &OneForm, form: &ContactForm) -> OneForm {
    let beta_r = beta.contract(&form.reeb_components());
    beta.add_multiple(&beta_r.scale(-1.0), &form.alpha)
}

/// The tensors entering the perturbation family for one `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationTensor {
    /// `h = β_ξ⊗β_ξ − ½ q g_ξ`.
    pub h: SymTensor,
    pub beta_xi: OneForm,
    /// `q = |β_ξ|²_g`.
    pub q: TrigPoly,
    /// `g_ξ = g − α⊗α`.
    pub g_xi: SymTensor,
}

fn constant_base(g: &MetricField) -> Result<([[f64; 3]; 3], Matrix3<f64>)> {
    let m = g.as_constant().ok_or(ContactError::NonConstantBase)?;
    let inv = to_matrix(&m).try_inverse().ok_or(ContactError::NotPositiveDefinite { epsilon: 0.0, x: [0.0; 3] })?;
    Ok((m, inv))
}

/// Builds `h` for a constant-coefficient base metric `g` compatible with `α`.
pub fn variation_tensor(beta: &OneForm, form: &ContactForm, g: &MetricField) -> Result<VariationTensor> {
    let (gm, ginv) = constant_base(g)?;
    let beta_xi = xi_projection(beta, form);
    let mut q = TrigPoly::zero();
    for i in 0..3 {
        for j in 0..3 {
            if ginv[(i, j)] != 0.0 {
                q = &q + &(&beta_xi.components[i] * &beta_xi.components[j]).scale(ginv[(i, j)]);
            }
        }
    }
    let g_xi = &SymTensor::constant(gm) - &SymTensor::square(&form.alpha);
    let h = &SymTensor::square(&beta_xi) - &g_xi.mul_poly(&q).scale(0.5);
    Ok(VariationTensor { h, beta_xi, q, g_xi })
}

/// `Tr_g h = tr(g⁻¹ h)` at a point.
pub fn trace_g(g: &[[f64; 3]; 3], h: &[[f64; 3]; 3]) -> f64 {
    let ginv = to_matrix(g).try_inverse().unwrap_or_else(|| Matrix3::from_element(f64::NAN));
    (ginv * to_matrix(h)).trace()
}

/// Pointwise invariants of `h` over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationCheck {
    /// `sup |Tr_g h|`.
    pub trace: f64,
    /// `sup |h(R, ·)|`.
    pub reeb_contraction: f64,
}

pub fn check_variation(vt: &VariationTensor, form: &ContactForm, g: &MetricField, n: usize) -> VariationCheck {
    let hs = vt.h.on_grid(n);
    let gs = g.on_grid(n);
    let r = form.reeb.on_grid(n);
    let mut out = VariationCheck { trace: 0.0, reeb_contraction: 0.0 };
    for p in 0..hs.len() {
        out.trace = out.trace.max(trace_g(&gs[p], &hs[p]).abs());
        let hr = to_matrix(&hs[p]) * Vector3::new(r[0][p], r[1][p], r[2][p]);
        out.reeb_contraction = out.reeb_contraction.max(hr.amax());
    }
    out
}

/// `g_ε` for a list of `ε` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFamily {
    pub base: MetricField,
    pub beta: OneForm,
    pub variation: VariationTensor,
    pub epsilon_grid: Vec<f64>,
}

impl MetricFamily {
    /// Assembles `g_ε` and checks positive definiteness on the default grid.
    pub fn member(&self, epsilon: f64) -> Result<MetricField> {
        if epsilon == 0.0 {
            return Ok(self.base.clone());
        }
        if !epsilon.is_finite() {
            return Err(ContactError::NotPositiveDefinite { epsilon, x: [0.0; 3] });
        }
        let mut g = self.base.clone();
        g.terms.push(MetricTerm { weight: Weight::Constant { value: epsilon }, tensor: SymTensor::square(&self.variation.beta_xi) });
        g.terms.push(MetricTerm { weight: Weight::Stretch { epsilon, q: self.variation.q.clone() }, tensor: self.variation.g_xi.clone() });
        let (min_eig, x) = g.min_eigenvalue(DEFAULT_CHECK_GRID);
        if !(min_eig > 0.0) {
            return Err(ContactError::NotPositiveDefinite { epsilon, x });
        }
        Ok(g)
    }

    pub fn members(&self) -> Result<Vec<MetricField>> {
        self.epsilon_grid.iter().map(|&e| self.member(e)).collect()
    }
}

pub fn metric_family(form: &ContactForm, g: &MetricField, beta: &OneForm, epsilons: &[f64]) -> Result<MetricFamily> {
    let variation = variation_tensor(beta, form, g)?;
    let fam = MetricFamily { base: g.clone(), beta: beta.clone(), variation, epsilon_grid: epsilons.to_vec() };
    for &e in epsilons {
        fam.member(e)?;
    }
    Ok(fam)
}

/// Fraction of grid points where the coordinate norm of `α∧β` is below `tol`.
pub fn noncollinearity_measure(alpha: &OneForm, beta: &OneForm, n: usize, tol: f64) -> f64 {
    let a = alpha.on_grid(n);
    let b = beta.on_grid(n);
    let total = n * n * n;
    let below = (0..total)
        .filter(|&p| {
            let c = [
                a[1][p] * b[2][p] - a[2][p] * b[1][p],
                a[2][p] * b[0][p] - a[0][p] * b[2][p],
                a[0][p] * b[1][p] - a[1][p] * b[0][p],
            ];
            (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() < tol
        })
        .count();
    below as f64 / total as f64
}

/// `∫ [λ h(a₂♯, a₁♯) − (λ/2) Tr_g h · g(a₂♯, a₁♯)] vol_g` over T³.
///
/// The grid is chosen above the trig degree of the integrand, so the
/// uniform-grid rule is exact whenever `g` is polynomial with polynomial
/// inverse and volume density (in particular for constant `g`).
pub fn variation_pairing(a1: &OneForm, a2: &OneForm, h: &SymTensor, g: &MetricField, lambda: f64) -> f64 {
    let degree = (a1.degree() + a2.degree() + h.degree() + g.degree()) as usize;
    let n = (degree + 1).max(DEFAULT_CHECK_GRID);
    variation_pairing_on_grid(a1, a2, h, g, lambda, n)
}

pub fn variation_pairing_on_grid(a1: &OneForm, a2: &OneForm, h: &SymTensor, g: &MetricField, lambda: f64, n: usize) -> f64 {
    let v1 = a1.on_grid(n);
    let v2 = a2.on_grid(n);
    let hs = h.on_grid(n);
    let gs = g.on_grid(n);
    let mut sum = 0.0;
    for p in 0..hs.len() {
        let gm = to_matrix(&gs[p]);
        let ginv = gm.try_inverse().unwrap_or_else(|| Matrix3::from_element(f64::NAN));
        let hm = to_matrix(&hs[p]);
        let s1 = ginv * Vector3::new(v1[0][p], v1[1][p], v1[2][p]);
        let s2 = ginv * Vector3::new(v2[0][p], v2[1][p], v2[2][p]);
        let h21 = s2.dot(&(hm * s1));
        let g21 = s2.dot(&(gm * s1));
        let tr = (ginv * hm).trace();
        sum += (lambda * h21 - 0.5 * lambda * tr * g21) * gm.determinant().sqrt();
    }
    sum / hs.len() as f64 * TAU.powi(3)
}

/// `(2π)^{-3/2} (sin x₁ dx₂ + cos x₁ dx₃)`, the flat dual of a unit-`L²`
/// element of the unit curl eigenspace that is `L²`-orthogonal to `α`.
pub fn standard_beta() -> OneForm {
    let s = TAU.powf(-1.5);
    let e1 = beltrami_core::WaveVector::unit(0);
    OneForm::new([TrigPoly::zero(), TrigPoly::sin(e1, s), TrigPoly::cos(e1, s)])
}

/// Closed form of `½ ∫ |β_ξ|⁴ vol` for [`standard_beta`] on the flat model:
/// `|β_ξ|² = (2π)⁻³ (1 − sin²x₁ sin²x₃)`, whose square integrates to
/// `(41/64)(2π)⁻³`.
pub fn standard_beta_quartic_half() -> f64 {
    41.0 / 128.0 / TAU.powi(3)
}

/// `∫ g(a₁♯, a₂♯) vol_g` (the `L²` pairing of 1-forms).
pub fn l2_pairing(a1: &OneForm, a2: &OneForm, g: &MetricField, n: usize) -> f64 {
    let v1 = a1.on_grid(n);
    let v2 = a2.on_grid(n);
    let gs = g.on_grid(n);
    let mut sum = 0.0;
    for (p, gp) in gs.iter().enumerate() {
        let gm = to_matrix(gp);
        let ginv = gm.try_inverse().unwrap_or_else(|| Matrix3::from_element(f64::NAN));
        let s = Vector3::new(v1[0][p], v1[1][p], v1[2][p]).dot(&(ginv * Vector3::new(v2[0][p], v2[1][p], v2[2][p])));
        sum += s * gm.determinant().sqrt();
    }
    sum / gs.len() as f64 * TAU.powi(3)
}

/// The flat dual of a vector field, `L²`-orthogonalized against `α`.
pub fn orthogonal_dual(v: &SpectralVectorField, form: &ContactForm, g: &MetricField) -> OneForm {
    let b = OneForm::flat_dual(v);
    let n = DEFAULT_CHECK_GRID;
    let c = l2_pairing(&b, &form.alpha, g, n) / l2_pairing(&form.alpha, &form.alpha, g, n);
    b.add_multiple(&TrigPoly::constant(-c), &form.alpha)
}
