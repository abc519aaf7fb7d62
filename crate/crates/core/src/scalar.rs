//! Real scalar fields on T³ stored as truncated Fourier series.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::grid;
use crate::lattice::WaveVector;

/// A real trigonometric polynomial `Σ ĉ(k) e^{ik·x}` with `ĉ(−k) = conj ĉ(k)`.
///
/// Both members of every `±k` pair are stored. The truncation radius is the
/// smallest box `|k|∞ ≤ K` the representation is declared on; inserting a
/// mode outside it enlarges the box.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarSpectralField {
    coeffs: BTreeMap<WaveVector, Complex64>,
    truncation_radius: u32,
}

impl ScalarSpectralField {
    pub fn zero(truncation_radius: u32) -> Self {
        ScalarSpectralField { coeffs: BTreeMap::new(), truncation_radius }
    }

    pub fn constant(value: f64) -> Self {
        let mut f = Self::zero(0);
        f.set_pair(WaveVector::ZERO, Complex64::new(value, 0.0));
        f
    }

    /// `a cos(k·x)`.
    pub fn cos_mode(k: WaveVector, a: f64) -> Self {
        let mut f = Self::zero(k.inf_norm());
        f.add_trig(k, a, 0.0);
        f
    }

    /// `b sin(k·x)`.
    pub fn sin_mode(k: WaveVector, b: f64) -> Self {
        let mut f = Self::zero(k.inf_norm());
        f.add_trig(k, 0.0, b);
        f
    }

    /// Adds `a cos(k·x) + b sin(k·x)`.
    pub fn add_trig(&mut self, k: WaveVector, a: f64, b: f64) {
        if k.is_zero() {
            let c = self.coeff(&k) + a;
            self.set_pair(k, c);
            return;
        }
        // a cos θ + b sin θ = (a − ib)/2 e^{iθ} + c.c.
        let c = self.coeff(&k) + Complex64::new(a / 2.0, -b / 2.0);
        self.set_pair(k, c);
    }

    /// Sets `ĉ(k) = c` and `ĉ(−k) = conj c`. For `k = 0` only the real part is kept.
    pub fn set_pair(&mut self, k: WaveVector, c: Complex64) {
        self.truncation_radius = self.truncation_radius.max(k.inf_norm());
        if k.is_zero() {
            self.coeffs.insert(k, Complex64::new(c.re, 0.0));
        } else {
            self.coeffs.insert(k, c);
            self.coeffs.insert(-k, c.conj());
        }
    }

    pub(crate) fn from_map_unchecked(coeffs: BTreeMap<WaveVector, Complex64>, truncation_radius: u32) -> Self {
        ScalarSpectralField { coeffs, truncation_radius }
    }

    /// Builds a field from grid samples, keeping modes with `|k|∞ ≤ kmax`.
    pub fn from_grid(values: &[f64], n: usize, kmax: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in grid::analyze(values, n, kmax) {
            if k.is_zero() {
                coeffs.insert(k, Complex64::new(c.re, 0.0));
            } else {
                coeffs.insert(k, c);
            }
        }
        let mut f = ScalarSpectralField { coeffs, truncation_radius: kmax };
        f.enforce_reality();
        f
    }

    /// Replaces each pair by its Hermitian average, killing round-off asymmetry.
    pub(crate) fn enforce_reality(&mut self) {
        let keys: Vec<WaveVector> = self.coeffs.keys().copied().filter(|k| k.is_representative()).collect();
        for k in keys {
            let a = self.coeff(&k);
            let b = self.coeff(&-k).conj();
            self.set_pair(k, (a + b) * 0.5);
        }
    }

    pub fn truncation_radius(&self) -> u32 {
        self.truncation_radius
    }

    /// Largest `|k|∞` carrying a nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(k, _)| k.inf_norm())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, k: &WaveVector) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WaveVector, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Mean value over T³, i.e. `ĉ(0)`.
    pub fn mean(&self) -> f64 {
        self.coeff(&WaveVector::ZERO).re
    }

    /// `max |ĉ(k) − conj ĉ(−k)|` over stored modes.
    pub fn reality_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| (c - self.coeff(&-*k).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus `≤ tol`.
    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, c| c.norm() > tol);
    }

    pub fn scale(&self, s: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect();
        ScalarSpectralField { coeffs, truncation_radius: self.truncation_radius }
    }

    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            *coeffs.entry(*k).or_default() += c * s;
        }
        ScalarSpectralField { coeffs, truncation_radius: self.truncation_radius.max(other.truncation_radius) }
    }

    /// Exact product by discrete convolution of the coefficient sequences.
    pub fn product(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<WaveVector, Complex64> = BTreeMap::new();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                *coeffs.entry(*k1 + *k2).or_default() += c1 * c2;
            }
        }
        let l1 = |f: &Self| f.coeffs.values().map(|c| c.norm()).sum::<f64>();
        let floor = 1e-16 * l1(self) * l1(other);
        coeffs.retain(|_, c| c.norm() > floor);
        if let Some(c0) = coeffs.get_mut(&WaveVector::ZERO) {
            c0.im = 0.0;
        }
        let mut f = ScalarSpectralField {
            coeffs,
            truncation_radius: self.truncation_radius + other.truncation_radius,
        };
        f.enforce_reality();
        f
    }

    /// `∂f/∂x_axis`, the mode rule `ik_axis ĉ(k)`.
    pub fn partial(&self, axis: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| k.0[axis] != 0)
            .map(|(k, c)| (*k, c * Complex64::new(0.0, f64::from(k.0[axis]))))
            .collect();
        ScalarSpectralField { coeffs, truncation_radius: self.truncation_radius }
    }

    /// Exact pointwise evaluation by trigonometric summation.
    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        self.eval_complex(x).re
    }

    pub fn eval_complex(&self, x: &[f64; 3]) -> Complex64 {
        self.coeffs.iter().map(|(k, c)| c * Complex64::from_polar(1.0, k.dot(x))).sum()
    }

    /// Values at every point of the uniform `n³` grid (see [`grid`]).
    pub fn on_grid(&self, n: usize) -> Vec<f64> {
        grid::synthesize_real(self.coeffs.iter(), n)
    }

    /// Root-mean-square over T³ (Parseval).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(2π)⁻³ ∫ f g dx` by Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| (c * other.coeff(k).conj()).re)
            .sum()
    }

    /// Sum of coefficient moduli; bounds the sup norm from above.
    pub fn l1_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }
}

impl Add for &ScalarSpectralField {
    type Output = ScalarSpectralField;
    fn add(self, rhs: &ScalarSpectralField) -> ScalarSpectralField {
        self.add_scaled(rhs, 1.0)
    }
}

impl Sub for &ScalarSpectralField {
    type Output = ScalarSpectralField;
    fn sub(self, rhs: &ScalarSpectralField) -> ScalarSpectralField {
        self.add_scaled(rhs, -1.0)
    }
}

impl Mul for &ScalarSpectralField {
    type Output = ScalarSpectralField;
    fn mul(self, rhs: &ScalarSpectralField) -> ScalarSpectralField {
        self.product(rhs)
    }
}

impl Mul<f64> for &ScalarSpectralField {
    type Output = ScalarSpectralField;
    fn mul(self, rhs: f64) -> ScalarSpectralField {
        self.scale(rhs)
    }
}

impl Neg for &ScalarSpectralField {
    type Output = ScalarSpectralField;
    fn neg(self) -> ScalarSpectralField {
        self.scale(-1.0)
    }
}
