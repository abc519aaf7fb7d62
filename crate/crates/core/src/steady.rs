//! Steady Euler diagnostics: Bernoulli function, pressure and the two
//! residuals `v·∇v + ∇p` and `v × curl v − ∇F`.
//!
//! Quadratic terms are formed pseudo-spectrally on grids fine enough that
//! every product mode is represented exactly (no aliasing), then the
//! Poisson problems are solved mode by mode with zero mean.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::SpectralVectorField;
use crate::grid::dealiased_size;
use crate::scalar::ScalarSpectralField;

/// `u × w`, exact up to round-off.
pub fn cross_product(u: &SpectralVectorField, w: &SpectralVectorField) -> SpectralVectorField {
    let (ku, kw) = (u.degree(), w.degree());
    let n = dealiased_size(ku, kw);
    let [u1, u2, u3] = u.on_grid(n);
    let [w1, w2, w3] = w.on_grid(n);
    let len = n * n * n;
    let mut out = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    for i in 0..len {
        out[0][i] = u2[i] * w3[i] - u3[i] * w2[i];
        out[1][i] = u3[i] * w1[i] - u1[i] * w3[i];
        out[2][i] = u1[i] * w2[i] - u2[i] * w1[i];
    }
    SpectralVectorField::from_grid([&out[0], &out[1], &out[2]], n, ku + kw)
}

/// The advection term `(v·∇)v`.
pub fn advection(v: &SpectralVectorField) -> SpectralVectorField {
    let k = v.degree();
    let n = dealiased_size(k, k);
    let vg = v.on_grid(n);
    let dv: Vec<[Vec<f64>; 3]> = (0..3).map(|j| v.partial(j).on_grid(n)).collect();
    let len = n * n * n;
    let mut out = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    for p in 0..len {
        for i in 0..3 {
            out[i][p] = (0..3).map(|j| vg[j][p] * dv[j][i][p]).sum();
        }
    }
    SpectralVectorField::from_grid([&out[0], &out[1], &out[2]], n, 2 * k)
}

/// Zero-mean `φ` with `Δφ = div w`, i.e. `φ̂(k) = −i k·ŵ(k) / |k|²`.
pub fn poisson_of_divergence(w: &SpectralVectorField) -> ScalarSpectralField {
    let mut map = BTreeMap::new();
    for (k, c) in w.iter() {
        if k.is_zero() {
            continue;
        }
        let [k1, k2, k3] = k.as_f64();
        let kc = c[0] * k1 + c[1] * k2 + c[2] * k3;
        map.insert(*k, -Complex64::i() * kc / k.norm_sq() as f64);
    }
    ScalarSpectralField::from_map_unchecked(map, w.truncation_radius())
}

/// Bernoulli function: the zero-mean solution of `ΔF = div(v × curl v)`.
pub fn bernoulli(v: &SpectralVectorField) -> ScalarSpectralField {
    poisson_of_divergence(&cross_product(v, &v.curl()))
}

/// Pressure `p = −Δ⁻¹ div(v·∇v)` with zero mean.
pub fn pressure(v: &SpectralVectorField) -> ScalarSpectralField {
    poisson_of_divergence(&advection(v)).scale(-1.0)
}

/// Root-mean-square norms of the two steady-Euler residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyResidual {
    /// `‖v·∇v + ∇p‖`.
    pub momentum: f64,
    /// `‖v × curl v − ∇F‖`.
    pub bernoulli: f64,
}

pub fn steady_residual(v: &SpectralVectorField) -> SteadyResidual {
    let s = advection(v);
    let p = poisson_of_divergence(&s).scale(-1.0);
    let momentum = (&s + &SpectralVectorField::gradient(&p)).l2_norm();

    let w = cross_product(v, &v.curl());
    let f = poisson_of_divergence(&w);
    let bernoulli = (&w - &SpectralVectorField::gradient(&f)).l2_norm();
    SteadyResidual { momentum, bernoulli }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{make_abc, AbcParams};
    use crate::helicity::helicity_basis;
    use crate::lattice::WaveVector;
    use crate::random::random_beltrami;

    fn shear() -> SpectralVectorField {
        let mut v = SpectralVectorField::zero(1);
        v.add_trig(WaveVector::unit(1), [0.0; 3], [1.0, 0.0, 0.0]);
        v
    }

    fn sup_on_grid(f: &ScalarSpectralField, n: usize) -> f64 {
        f.on_grid(n).into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    #[test]
    fn bernoulli_of_abc_vanishes() {
        let f = bernoulli(&make_abc(AbcParams::new(1.0, 0.5, 0.1)));
        assert!(sup_on_grid(&f, 16) <= 1e-14);
    }

    #[test]
    fn bernoulli_of_shear_matches_symbolic() {
        // F = −cos(2x₂)/4
        let f = bernoulli(&shear());
        for x in [[0.0, 0.3, 0.0], [1.0, 2.5, -1.0]] {
            assert!((f.eval(&x) + (2.0 * x[1]).cos() / 4.0).abs() < 1e-15);
        }
        assert_eq!(f.mean(), 0.0);
    }

    #[test]
    fn bernoulli_of_random_beltrami_vanishes() {
        let f = bernoulli(&random_beltrami(2, 5).unwrap());
        assert!(sup_on_grid(&f, 12) <= 1e-12);
    }

    #[test]
    fn pressure_of_beltrami_is_minus_half_speed_squared() {
        // v·∇v = ∇(|v|²/2) − v × curl v, so p = −|v|²/2 + mean.
        let v = random_beltrami(3, 1).unwrap();
        let p = pressure(&v);
        let mut speed2 = ScalarSpectralField::zero(0);
        for i in 0..3 {
            let c = v.component(i);
            speed2 = &speed2 + &(&c * &c);
        }
        let expected = &speed2.scale(-0.5) + &ScalarSpectralField::constant(0.5 * speed2.mean());
        assert!((&p - &expected).l2_norm() < 1e-13);
    }

    #[test]
    fn pressure_of_constant_and_shear_vanish() {
        assert_eq!(pressure(&SpectralVectorField::constant([1.0, 2.0, 3.0])).l2_norm(), 0.0);
        assert!(pressure(&shear()).l2_norm() < 1e-15);
    }

    #[test]
    fn residuals() {
        let r = steady_residual(&make_abc(AbcParams::new(1.0, 0.5, 0.1)));
        assert!(r.momentum <= 1e-10 && r.bernoulli <= 1e-10, "{r:?}");
        let r = steady_residual(&shear());
        assert!(r.momentum <= 1e-10 && r.bernoulli <= 1e-10, "{r:?}");

        let mixed = &helicity_basis(1).unwrap()[0] + &helicity_basis(2).unwrap()[0];
        let r = steady_residual(&mixed);
        assert!(r.bernoulli > 0.01, "{r:?}");
    }
}
