//! Real trig basis of 1-forms: `cos(k·x) dx_j`, `sin(k·x) dx_j` for every
//! representative `k` with `|k|∞ ≤ K`, plus the three constant forms.

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use beltrami_contact::{OneForm, TrigPoly};
use beltrami_core::WaveVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Const,
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub profile: Profile,
    pub k: WaveVector,
    pub axis: usize,
}

impl BasisElement {
    /// The scalar profile as `Σ c e^{ik·x}`.
    pub fn exponentials(&self) -> Vec<(WaveVector, Complex64)> {
        let neg = WaveVector::new(-self.k.0[0], -self.k.0[1], -self.k.0[2]);
        match self.profile {
            Profile::Const => vec![(self.k, Complex64::new(1.0, 0.0))],
            Profile::Cos => vec![(self.k, Complex64::new(0.5, 0.0)), (neg, Complex64::new(0.5, 0.0))],
            Profile::Sin => vec![(self.k, Complex64::new(0.0, -0.5)), (neg, Complex64::new(0.0, 0.5))],
        }
    }

    /// `∫ φ² dx` over T³.
    pub fn flat_norm_sq(&self) -> f64 {
        let vol = std::f64::consts::TAU.powi(3);
        match self.profile {
            Profile::Const => vol,
            _ => 0.5 * vol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormBasis {
    pub truncation: u32,
    pub elements: Vec<BasisElement>,
    #[serde(skip)]
    index: HashMap<BasisElement, usize>,
}

/// Constants first, then representatives in lexicographic order; within a
/// mode the cosine triple precedes the sine triple.
///
/// # Panics
/// If `k == 0`.
pub fn build_basis(k: u32) -> FormBasis {
    assert!(k >= 1, "truncation must be at least 1");
    let r = k as i32;
    let mut elements = Vec::with_capacity(3 * (2 * k as usize + 1).pow(3));
    for axis in 0..3 {
        elements.push(BasisElement { profile: Profile::Const, k: WaveVector::ZERO, axis });
    }
    for k1 in -r..=r {
        for k2 in -r..=r {
            for k3 in -r..=r {
                let kv = WaveVector::new(k1, k2, k3);
                if kv.is_zero() || !kv.is_representative() {
                    continue;
                }
                for profile in [Profile::Cos, Profile::Sin] {
                    for axis in 0..3 {
                        elements.push(BasisElement { profile, k: kv, axis });
                    }
                }
            }
        }
    }
    FormBasis::from_elements(k, elements)
}

impl FormBasis {
    fn from_elements(truncation: u32, elements: Vec<BasisElement>) -> Self {
        let index = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        FormBasis { truncation, elements, index }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, e: &BasisElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Diagonal of the flat Gram matrix `∫ e_i · e_j dx`.
    pub fn flat_gram_diagonal(&self) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.elements.iter().map(BasisElement::flat_norm_sq))
    }

    /// Coordinates of a 1-form in the basis, or `None` if it has modes
    /// outside the truncation.
    pub fn coordinates(&self, form: &OneForm) -> Option<DVector<f64>> {
        let mut out = DVector::zeros(self.dim());
        for (axis, comp) in form.components.iter().enumerate() {
            for (k, c) in comp.0.iter() {
                if c.norm() == 0.0 || !k.is_representative() && !k.is_zero() {
                    continue;
                }
                if k.is_zero() {
                    out[self.index_of(&BasisElement { profile: Profile::Const, k: *k, axis })?] = c.re;
                    continue;
                }
                // c e^{ikx} + c̄ e^{-ikx} = 2 Re c cos − 2 Im c sin
                out[self.index_of(&BasisElement { profile: Profile::Cos, k: *k, axis })?] = 2.0 * c.re;
                out[self.index_of(&BasisElement { profile: Profile::Sin, k: *k, axis })?] = -2.0 * c.im;
            }
        }
        Some(out)
    }

    pub fn to_form(&self, coords: &DVector<f64>) -> OneForm {
        let mut comps = [TrigPoly::zero(), TrigPoly::zero(), TrigPoly::zero()];
        for (e, &c) in self.elements.iter().zip(coords.iter()) {
            if c == 0.0 {
                continue;
            }
            let term = match e.profile {
                Profile::Const => TrigPoly::constant(c),
                Profile::Cos => TrigPoly::cos(e.k, c),
                Profile::Sin => TrigPoly::sin(e.k, c),
            };
            comps[e.axis] = &comps[e.axis] + &term;
        }
        OneForm::new(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use beltrami_contact::std_contact_t3;

    #[test]
    fn dimension_count() {
        assert_eq!(build_basis(1).dim(), 81);
        assert_eq!(build_basis(2).dim(), 375);
    }

    #[test]
    fn index_is_bijective() {
        let b = build_basis(2);
        for (i, e) in b.elements.iter().enumerate() {
            assert_eq!(b.index_of(e), Some(i));
        }
    }

    #[test]
    fn alpha_round_trips() {
        let (form, _) = std_contact_t3();
        let b = build_basis(1);
        let c = b.coordinates(&form.alpha).unwrap();
        assert_eq!(c.iter().filter(|v| **v != 0.0).count(), 2);
        let back = b.to_form(&c);
        for x in [[0.3, 1.0, 2.0], [5.0, 0.1, 0.7]] {
            let (u, v) = (back.eval(&x), form.alpha.eval(&x));
            for i in 0..3 {
                assert!((u[i] - v[i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn out_of_range_form_has_no_coordinates() {
        let f = OneForm::new([TrigPoly::cos(WaveVector::new(2, 0, 0), 1.0), TrigPoly::zero(), TrigPoly::zero()]);
        assert!(build_basis(1).coordinates(&f).is_none());
        assert!(build_basis(2).coordinates(&f).is_some());
    }
}
