//! Real vector fields on T³ as truncated Fourier series, with the flat-metric
//! curl, divergence and gradient acting mode by mode.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::grid;
use crate::lattice::WaveVector;
use crate::scalar::ScalarSpectralField;

pub type Vec3c = [Complex64; 3];

const ZERO3: Vec3c = [Complex64::new(0.0, 0.0); 3];

fn conj3(v: &Vec3c) -> Vec3c {
    v.map(|c| c.conj())
}

fn norm_sqr3(v: &Vec3c) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `v(x) = Σ v̂(k) e^{ik·x}` with `v̂(−k) = conj v̂(k)`.
///
/// Both members of each `±k` pair are stored; see [`ScalarSpectralField`]
/// for the truncation-radius convention.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralVectorField {
    coeffs: BTreeMap<WaveVector, Vec3c>,
    truncation_radius: u32,
}

impl SpectralVectorField {
    pub fn zero(truncation_radius: u32) -> Self {
        SpectralVectorField { coeffs: BTreeMap::new(), truncation_radius }
    }

    /// A constant field (only the `k = 0` mode).
    pub fn constant(v: [f64; 3]) -> Self {
        let mut f = Self::zero(0);
        f.set_pair(WaveVector::ZERO, v.map(|x| Complex64::new(x, 0.0)));
        f
    }

    /// Sets `v̂(k) = c`, `v̂(−k) = conj c`. For `k = 0` the imaginary parts are dropped.
    pub fn set_pair(&mut self, k: WaveVector, c: Vec3c) {
        self.truncation_radius = self.truncation_radius.max(k.inf_norm());
        if k.is_zero() {
            self.coeffs.insert(k, c.map(|z| Complex64::new(z.re, 0.0)));
        } else {
            self.coeffs.insert(k, c);
            self.coeffs.insert(-k, conj3(&c));
        }
    }

    /// Adds `a cos(k·x) + b sin(k·x)` for real vectors `a`, `b`.
    pub fn add_trig(&mut self, k: WaveVector, a: [f64; 3], b: [f64; 3]) {
        let old = self.coeff(&k);
        let c = if k.is_zero() {
            [0, 1, 2].map(|i| old[i] + a[i])
        } else {
            [0, 1, 2].map(|i| old[i] + Complex64::new(a[i] / 2.0, -b[i] / 2.0))
        };
        self.set_pair(k, c);
    }

    pub fn from_components(components: [&ScalarSpectralField; 3]) -> Self {
        let mut coeffs: BTreeMap<WaveVector, Vec3c> = BTreeMap::new();
        for (i, comp) in components.iter().enumerate() {
            for (k, c) in comp.iter() {
                coeffs.entry(*k).or_insert(ZERO3)[i] = *c;
            }
        }
        let truncation_radius = components.iter().map(|c| c.truncation_radius()).max().unwrap_or(0);
        SpectralVectorField { coeffs, truncation_radius }
    }

    pub fn component(&self, i: usize) -> ScalarSpectralField {
        let map = self
            .coeffs
            .iter()
            .filter(|(_, c)| c[i].norm_sqr() > 0.0)
            .map(|(k, c)| (*k, c[i]))
            .collect();
        ScalarSpectralField::from_map_unchecked(map, self.truncation_radius)
    }

    /// Builds a field from grid samples of its three components.
    pub fn from_grid(values: [&[f64]; 3], n: usize, kmax: u32) -> Self {
        let comps = values.map(|v| ScalarSpectralField::from_grid(v, n, kmax));
        let mut f = Self::from_components([&comps[0], &comps[1], &comps[2]]);
        f.truncation_radius = kmax;
        f
    }

    pub fn truncation_radius(&self) -> u32 {
        self.truncation_radius
    }

    /// Largest `|k|∞` carrying a nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|(_, c)| norm_sqr3(c) > 0.0)
            .map(|(k, _)| k.inf_norm())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, k: &WaveVector) -> Vec3c {
        self.coeffs.get(k).copied().unwrap_or(ZERO3)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WaveVector, &Vec3c)> {
        self.coeffs.iter()
    }

    /// Representative modes (`k = 0` and one member of each `±k` pair).
    pub fn representatives(&self) -> impl Iterator<Item = (&WaveVector, &Vec3c)> {
        self.coeffs.iter().filter(|(k, _)| k.is_representative())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn reality_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let d = conj3(&self.coeff(&-*k));
                (0..3).map(|i| (c[i] - d[i]).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, c| norm_sqr3(c).sqrt() > tol);
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_modes(|_, c| c.map(|z| z * s))
    }

    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let e = coeffs.entry(*k).or_insert(ZERO3);
            for i in 0..3 {
                e[i] += c[i] * s;
            }
        }
        SpectralVectorField { coeffs, truncation_radius: self.truncation_radius.max(other.truncation_radius) }
    }

    fn map_modes(&self, f: impl Fn(&WaveVector, &Vec3c) -> Vec3c) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, f(k, c))).collect();
        SpectralVectorField { coeffs, truncation_radius: self.truncation_radius }
    }

    /// Flat-metric curl, `(curl v)^(k) = i k × v̂(k)`.
    pub fn curl(&self) -> Self {
        self.map_modes(|k, c| {
            let [k1, k2, k3] = k.as_f64();
            let i = Complex64::i();
            [
                i * (c[2] * k2 - c[1] * k3),
                i * (c[0] * k3 - c[2] * k1),
                i * (c[1] * k1 - c[0] * k2),
            ]
        })
    }

    /// `(div v)^(k) = i k · v̂(k)`.
    pub fn divergence(&self) -> ScalarSpectralField {
        let mut map = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let [k1, k2, k3] = k.as_f64();
            let d = Complex64::i() * (c[0] * k1 + c[1] * k2 + c[2] * k3);
            if d.norm_sqr() > 0.0 {
                map.insert(*k, d);
            }
        }
        ScalarSpectralField::from_map_unchecked(map, self.truncation_radius)
    }

    /// `(∇f)^(k) = i k f̂(k)`.
    pub fn gradient(f: &ScalarSpectralField) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in f.iter() {
            if k.is_zero() {
                continue;
            }
            let ic = Complex64::i() * c;
            coeffs.insert(*k, k.as_f64().map(|kj| ic * kj));
        }
        SpectralVectorField { coeffs, truncation_radius: f.truncation_radius() }
    }

    /// `∂v/∂x_axis`.
    pub fn partial(&self, axis: usize) -> Self {
        self.map_modes(|k, c| {
            let f = Complex64::new(0.0, f64::from(k.0[axis]));
            c.map(|z| z * f)
        })
    }

    pub fn eval_complex(&self, x: &[f64; 3]) -> Vec3c {
        let mut out = ZERO3;
        for (k, c) in &self.coeffs {
            let e = Complex64::from_polar(1.0, k.dot(x));
            for i in 0..3 {
                out[i] += c[i] * e;
            }
        }
        out
    }

    /// Exact value at `x` by trigonometric summation.
    pub fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        self.eval_complex(x).map(|z| z.re)
    }

    /// Evaluates at each point after wrapping it into `[0, 2π)³`.
    pub fn evaluate(&self, points: &[[f64; 3]]) -> Vec<[f64; 3]> {
        points.iter().map(|p| self.eval(&p.map(|c| c.rem_euclid(TAU)))).collect()
    }

    /// Jacobian `J[i][j] = ∂v_i/∂x_j` at `x`.
    pub fn jacobian_at(&self, x: &[f64; 3]) -> [[f64; 3]; 3] {
        let mut jac = [[0.0; 3]; 3];
        for (k, c) in &self.coeffs {
            let e = Complex64::from_polar(1.0, k.dot(x));
            let kf = k.as_f64();
            for i in 0..3 {
                // Re(i k_j c e) = −k_j Im(c e)
                let im = (c[i] * e).im;
                for j in 0..3 {
                    jac[i][j] -= kf[j] * im;
                }
            }
        }
        jac
    }

    /// Component values on the uniform `n³` grid.
    pub fn on_grid(&self, n: usize) -> [Vec<f64>; 3] {
        [0, 1, 2].map(|i| {
            grid::synthesize_real(self.coeffs.iter().map(|(k, c)| (k, &c[i])), n)
        })
    }

    /// Root-mean-square norm `((2π)⁻³ ∫ |v|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(norm_sqr3).sum::<f64>().sqrt()
    }

    /// `(2π)⁻³ ∫ u · v dx` by Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let d = other.coeff(k);
                (0..3).map(|i| (c[i] * d[i].conj()).re).sum::<f64>()
            })
            .sum()
    }

    /// Largest coefficient-wise deviation `max_k |u(k) − v(k)|`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&WaveVector> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let a = self.coeff(k);
                let b = other.coeff(k);
                (0..3).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

impl Add for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn add(self, rhs: &SpectralVectorField) -> SpectralVectorField {
        self.add_scaled(rhs, 1.0)
    }
}

impl Sub for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn sub(self, rhs: &SpectralVectorField) -> SpectralVectorField {
        self.add_scaled(rhs, -1.0)
    }
}

impl Mul<f64> for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn mul(self, rhs: f64) -> SpectralVectorField {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shear() -> SpectralVectorField {
        // (sin x₂, 0, 0)
        let mut v = SpectralVectorField::zero(1);
        v.add_trig(WaveVector::unit(1), [0.0; 3], [1.0, 0.0, 0.0]);
        v
    }

    #[test]
    fn curl_of_shear_matches_symbolic() {
        // curl (sin x₂, 0, 0) = (0, 0, −cos x₂)
        let c = shear().curl();
        for x in [[0.1, 0.2, 0.3], [2.0, -1.0, 4.0]] {
            let got = c.eval(&x);
            assert!(got[0].abs() < 1e-15 && got[1].abs() < 1e-15);
            assert!((got[2] + x[1].cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn curl_of_constant_vanishes() {
        let c = SpectralVectorField::constant([1.0, -2.0, 3.0]).curl();
        assert_eq!(c.l2_norm(), 0.0);
    }

    #[test]
    fn divergence_of_cos_x1() {
        // div (cos x₁, 0, 0) = −sin x₁
        let mut v = SpectralVectorField::zero(1);
        v.add_trig(WaveVector::unit(0), [1.0, 0.0, 0.0], [0.0; 3]);
        let d = v.divergence();
        let x = [0.7, 0.0, 0.0];
        assert!((d.eval(&x) + 0.7f64.sin()).abs() < 1e-15);
        assert_eq!(SpectralVectorField::zero(2).divergence().l2_norm(), 0.0);
    }

    #[test]
    fn jacobian_matches_partials() {
        let mut v = shear();
        v.add_trig(WaveVector::new(1, 0, 2), [0.2, -0.3, 0.5], [0.1, 0.4, -0.6]);
        let x = [0.3, 1.7, -2.2];
        let jac = v.jacobian_at(&x);
        for j in 0..3 {
            let dj = v.partial(j).eval(&x);
            for i in 0..3 {
                assert!((jac[i][j] - dj[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn evaluation_is_periodic_and_real() {
        let mut v = shear();
        v.add_trig(WaveVector::new(2, -1, 1), [0.2, -0.3, 0.5], [0.1, 0.4, -0.6]);
        let x = [0.4, 0.5, 0.6];
        let shifted = [x[0] + TAU, x[1], x[2]];
        let a = v.evaluate(&[x, shifted]);
        for i in 0..3 {
            assert!((a[0][i] - a[1][i]).abs() < 1e-13);
        }
        assert!(v.eval_complex(&x).iter().all(|z| z.im.abs() < 1e-13));
        assert_eq!(v.reality_defect(), 0.0);
    }
}
