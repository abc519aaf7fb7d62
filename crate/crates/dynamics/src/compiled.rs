//! Fast pointwise evaluation of a spectral field and its Jacobian.

use std::f64::consts::TAU;

use beltrami_core::SpectralVectorField;

/// `v(x) = m + Σ a cos(k·x) + b sin(k·x)` over representative modes.
#[derive(Debug, Clone)]
pub struct CompiledField {
    mean: [f64; 3],
    modes: Vec<([f64; 3], [f64; 3], [f64; 3])>,
}

impl CompiledField {
    pub fn new(v: &SpectralVectorField) -> Self {
        let mut mean = [0.0; 3];
        let mut modes = Vec::new();
        for (k, c) in v.representatives() {
            if k.is_zero() {
                mean = c.map(|z| z.re);
            } else {
                modes.push((k.as_f64(), c.map(|z| 2.0 * z.re), c.map(|z| -2.0 * z.im)));
            }
        }
        CompiledField { mean, modes }
    }

    pub fn value(&self, x: &[f64; 3]) -> [f64; 3] {
        let mut out = self.mean;
        for (k, a, b) in &self.modes {
            let (s, c) = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).sin_cos();
            for i in 0..3 {
                out[i] += a[i] * c + b[i] * s;
            }
        }
        out
    }

    /// Value and Jacobian `J[i][j] = ∂_j v_i`.
    pub fn value_and_jacobian(&self, x: &[f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
        let mut out = self.mean;
        let mut jac = [[0.0; 3]; 3];
        for (k, a, b) in &self.modes {
            let (s, c) = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).sin_cos();
            for i in 0..3 {
                out[i] += a[i] * c + b[i] * s;
                let d = b[i] * c - a[i] * s;
                for j in 0..3 {
                    jac[i][j] += d * k[j];
                }
            }
        }
        (out, jac)
    }

    pub fn negated(&self) -> Self {
        CompiledField {
            mean: self.mean.map(|m| -m),
            modes: self.modes.iter().map(|(k, a, b)| (*k, a.map(|x| -x), b.map(|x| -x))).collect(),
        }
    }
}

/// Reduces a coordinate to `[0, 2π)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn wrap3(x: &[f64; 3]) -> [f64; 3] {
    x.map(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use beltrami_core::{make_abc, random_beltrami, AbcParams};

    #[test]
    fn agrees_with_spectral_evaluation() {
        let v = &make_abc(AbcParams::new(1.0, 0.5, 0.1)) + &random_beltrami(3, 2).unwrap();
        let f = CompiledField::new(&v);
        for x in [[0.1, 0.2, 0.3], [4.0, -2.0, 9.0]] {
            let (val, jac) = f.value_and_jacobian(&x);
            let want = v.eval(&x);
            let want_j = v.jacobian_at(&x);
            for i in 0..3 {
                assert!((val[i] - want[i]).abs() < 1e-13);
                for j in 0..3 {
                    assert!((jac[i][j] - want_j[i][j]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn wrap_stays_in_range() {
        assert_eq!(wrap(-1e-18), 0.0);
        assert!((wrap(-1.0) - (TAU - 1.0)).abs() < 1e-15);
        assert_eq!(wrap(TAU), 0.0);
    }
}
