//! Real trigonometric polynomials and the 1-forms and symmetric 2-tensors
//! built from them.
//!
//! JSON form of a polynomial: a list of terms
//! `{"basis": "cos" | "sin", "k": [k1, k2, k3], "coefficient": c}`, one per
//! representative wave vector and basis function (`k = 0` is a `cos` term).

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use beltrami_core::{ScalarSpectralField, SpectralVectorField, WaveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigBasis {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub basis: TrigBasis,
    pub k: WaveVector,
    pub coefficient: f64,
}

/// A real trigonometric polynomial on T³.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<TrigTerm>", into = "Vec<TrigTerm>")]
pub struct TrigPoly(pub ScalarSpectralField);

impl From<Vec<TrigTerm>> for TrigPoly {
    fn from(terms: Vec<TrigTerm>) -> Self {
        let mut f = ScalarSpectralField::zero(0);
        for t in terms {
            let (k, sign) = if t.k.is_representative() { (t.k, 1.0) } else { (-t.k, -1.0) };
            match t.basis {
                TrigBasis::Cos => f.add_trig(k, t.coefficient, 0.0),
                TrigBasis::Sin => f.add_trig(k, 0.0, sign * t.coefficient),
            }
        }
        TrigPoly(f)
    }
}

impl From<TrigPoly> for Vec<TrigTerm> {
    fn from(p: TrigPoly) -> Self {
        p.terms()
    }
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly(ScalarSpectralField::zero(0))
    }

    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Self::zero()
        } else {
            TrigPoly(ScalarSpectralField::constant(c))
        }
    }

    pub fn cos(k: WaveVector, a: f64) -> Self {
        TrigPoly(ScalarSpectralField::cos_mode(k, a))
    }

    pub fn sin(k: WaveVector, b: f64) -> Self {
        TrigPoly(ScalarSpectralField::sin_mode(k, b))
    }

    /// Nonzero terms, ordered by wave vector then basis.
    pub fn terms(&self) -> Vec<TrigTerm> {
        let mut out = Vec::new();
        for (k, c) in self.0.iter().filter(|(k, _)| k.is_representative()) {
            if k.is_zero() {
                if c.re != 0.0 {
                    out.push(TrigTerm { basis: TrigBasis::Cos, k: *k, coefficient: c.re });
                }
                continue;
            }
            if c.re != 0.0 {
                out.push(TrigTerm { basis: TrigBasis::Cos, k: *k, coefficient: 2.0 * c.re });
            }
            if c.im != 0.0 {
                out.push(TrigTerm { basis: TrigBasis::Sin, k: *k, coefficient: -2.0 * c.im });
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        self.0.eval(x)
    }

    pub fn on_grid(&self, n: usize) -> Vec<f64> {
        self.0.on_grid(n)
    }

    pub fn partial(&self, axis: usize) -> Self {
        TrigPoly(self.0.partial(axis))
    }

    pub fn scale(&self, s: f64) -> Self {
        TrigPoly(self.0.scale(s))
    }

    /// Largest `|k|∞` carried by a nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// The constant value if the polynomial has no oscillating modes.
    pub fn as_constant(&self) -> Option<f64> {
        self.0.iter().all(|(k, c)| k.is_zero() || c.norm() == 0.0).then(|| self.0.mean())
    }

    /// `(2π)⁻³ ∫ f`.
    pub fn mean(&self) -> f64 {
        self.0.mean()
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly(&self.0 + &rhs.0)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly(&self.0 - &rhs.0)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly(self.0.product(&rhs.0))
    }
}

/// `Σ a_i dx_i` with trigonometric-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneForm {
    pub components: [TrigPoly; 3],
}

impl OneForm {
    pub fn new(components: [TrigPoly; 3]) -> Self {
        OneForm { components }
    }

    /// The flat dual `Σ v_i dx_i` of a vector field.
    pub fn flat_dual(v: &SpectralVectorField) -> Self {
        OneForm { components: [0, 1, 2].map(|i| TrigPoly(v.component(i))) }
    }

    pub fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| self.components[i].eval(x))
    }

    pub fn on_grid(&self, n: usize) -> [Vec<f64>; 3] {
        [0, 1, 2].map(|i| self.components[i].on_grid(n))
    }

    /// Coordinate curl `W` with `dα = ι_W (dx₁∧dx₂∧dx₃)`.
    pub fn coordinate_curl(&self) -> OneForm {
        let c = &self.components;
        OneForm {
            components: [
                &c[2].partial(1) - &c[1].partial(2),
                &c[0].partial(2) - &c[2].partial(0),
                &c[1].partial(0) - &c[0].partial(1),
            ],
        }
    }

    /// Pairing `Σ a_i v_i` with a vector field given by polynomial components.
    pub fn contract(&self, v: &[TrigPoly; 3]) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for i in 0..3 {
            out = &out + &(&self.components[i] * &v[i]);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        OneForm { components: self.components.clone().map(|c| c.scale(s)) }
    }

    /// `self + f · other` for a polynomial `f`.
    pub fn add_multiple(&self, f: &TrigPoly, other: &OneForm) -> Self {
        OneForm { components: [0, 1, 2].map(|i| &self.components[i] + &(f * &other.components[i])) }
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(TrigPoly::degree).max().unwrap_or(0)
    }
}

/// Entry order of [`SymTensor::entries`].
pub const SYM_INDEX: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    SYM_INDEX.iter().position(|&p| p == (i, j)).expect("index in range")
}

/// Symmetric covariant 2-tensor; `entries` follow [`SYM_INDEX`]
/// (`11, 12, 13, 22, 23, 33`).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymTensor {
    pub entries: [TrigPoly; 6],
}

impl SymTensor {
    pub fn zero() -> Self {
        SymTensor::default()
    }

    pub fn constant(m: [[f64; 3]; 3]) -> Self {
        SymTensor { entries: SYM_INDEX.map(|(i, j)| TrigPoly::constant(m[i][j])) }
    }

    pub fn identity() -> Self {
        Self::constant([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn get(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[sym_slot(i, j)]
    }

    /// `a ⊗ b + b ⊗ a` halved, i.e. the symmetric product.
    pub fn sym_product(a: &OneForm, b: &OneForm) -> Self {
        SymTensor {
            entries: SYM_INDEX.map(|(i, j)| {
                let p = &a.components[i] * &b.components[j];
                let q = &a.components[j] * &b.components[i];
                (&p + &q).scale(0.5)
            }),
        }
    }

    /// `a ⊗ a`.
    pub fn square(a: &OneForm) -> Self {
        SymTensor { entries: SYM_INDEX.map(|(i, j)| &a.components[i] * &a.components[j]) }
    }

    pub fn scale(&self, s: f64) -> Self {
        SymTensor { entries: self.entries.clone().map(|e| e.scale(s)) }
    }

    pub fn mul_poly(&self, f: &TrigPoly) -> Self {
        SymTensor { entries: self.entries.clone().map(|e| &e * f) }
    }

    pub fn eval(&self, x: &[f64; 3]) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (s, &(i, j)) in SYM_INDEX.iter().enumerate() {
            let v = self.entries[s].eval(x);
            m[i][j] = v;
            m[j][i] = v;
        }
        m
    }

    /// Values on the uniform `n³` grid.
    pub fn on_grid(&self, n: usize) -> Vec<[[f64; 3]; 3]> {
        let vals: Vec<Vec<f64>> = self.entries.iter().map(|e| e.on_grid(n)).collect();
        (0..n * n * n)
            .map(|p| {
                let mut m = [[0.0; 3]; 3];
                for (s, &(i, j)) in SYM_INDEX.iter().enumerate() {
                    m[i][j] = vals[s][p];
                    m[j][i] = vals[s][p];
                }
                m
            })
            .collect()
    }

    pub fn as_constant(&self) -> Option<[[f64; 3]; 3]> {
        let mut m = [[0.0; 3]; 3];
        for (s, &(i, j)) in SYM_INDEX.iter().enumerate() {
            let v = self.entries[s].as_constant()?;
            m[i][j] = v;
            m[j][i] = v;
        }
        Some(m)
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().map(TrigPoly::degree).max().unwrap_or(0)
    }
}

impl Add for &SymTensor {
    type Output = SymTensor;
    fn add(self, rhs: &SymTensor) -> SymTensor {
        SymTensor { entries: [0, 1, 2, 3, 4, 5].map(|s| &self.entries[s] + &rhs.entries[s]) }
    }
}

impl Sub for &SymTensor {
    type Output = SymTensor;
    fn sub(self, rhs: &SymTensor) -> SymTensor {
        SymTensor { entries: [0, 1, 2, 3, 4, 5].map(|s| &self.entries[s] - &rhs.entries[s]) }
    }
}
