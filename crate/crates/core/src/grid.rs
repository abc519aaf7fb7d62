//! Uniform grids on T³ and the 3-D FFT used for pseudo-spectral products.
//!
//! Grid point `(i₁, i₂, i₃)` sits at `x = 2π (i₁, i₂, i₃) / n` and is stored
//! at flat index `(i₁ n + i₂) n + i₃`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::lattice::WaveVector;

/// Physical coordinates of a flat grid index.
pub fn grid_point(index: usize, n: usize) -> [f64; 3] {
    let i3 = index % n;
    let i2 = (index / n) % n;
    let i1 = index / (n * n);
    let h = TAU / n as f64;
    [i1 as f64 * h, i2 as f64 * h, i3 as f64 * h]
}

/// Smallest even grid size that represents products of two fields with
/// truncation radii `k1` and `k2` without aliasing.
///
/// The product carries modes up to `k1 + k2`; `n > 2 (k1 + k2)` keeps every
/// one of them on a distinct grid frequency.
pub fn dealiased_size(k1: u32, k2: u32) -> usize {
    let k = (k1 + k2) as usize;
    (2 * k + 2).max(4)
}

fn wrap_index(k: i32, n: usize) -> usize {
    k.rem_euclid(n as i32) as usize
}

/// In-place unnormalized 3-D DFT. `Inverse` computes `Σ c e^{+ik·x}`.
pub fn fft3(data: &mut [Complex64], n: usize, direction: FftDirection) {
    assert_eq!(data.len(), n * n * n, "grid buffer has wrong length");
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(n, direction);

    // Axis 3 is contiguous.
    fft.process(data);

    let mut line = vec![Complex64::default(); n];
    // Axis 2.
    for i1 in 0..n {
        for i3 in 0..n {
            for (i2, slot) in line.iter_mut().enumerate() {
                *slot = data[(i1 * n + i2) * n + i3];
            }
            fft.process(&mut line);
            for (i2, value) in line.iter().enumerate() {
                data[(i1 * n + i2) * n + i3] = *value;
            }
        }
    }
    // Axis 1.
    for i2 in 0..n {
        for i3 in 0..n {
            for (i1, slot) in line.iter_mut().enumerate() {
                *slot = data[(i1 * n + i2) * n + i3];
            }
            fft.process(&mut line);
            for (i1, value) in line.iter().enumerate() {
                data[(i1 * n + i2) * n + i3] = *value;
            }
        }
    }
}

/// Values of `Σ c_k e^{ik·x}` at every grid point.
///
/// Exact for any `n`: modes that alias onto the same grid frequency simply
/// add, which is what pointwise evaluation requires.
pub fn synthesize<'a, I>(modes: I, n: usize) -> Vec<Complex64>
where
    I: IntoIterator<Item = (&'a WaveVector, &'a Complex64)>,
{
    let mut buf = vec![Complex64::default(); n * n * n];
    for (k, c) in modes {
        let idx = (wrap_index(k.0[0], n) * n + wrap_index(k.0[1], n)) * n + wrap_index(k.0[2], n);
        buf[idx] += *c;
    }
    fft3(&mut buf, n, FftDirection::Inverse);
    buf
}

/// Same as [`synthesize`] but keeps only the real part.
pub fn synthesize_real<'a, I>(modes: I, n: usize) -> Vec<f64>
where
    I: IntoIterator<Item = (&'a WaveVector, &'a Complex64)>,
{
    synthesize(modes, n).into_iter().map(|z| z.re).collect()
}

/// Fourier coefficients `ĉ(k)` of grid samples for every `|k|∞ ≤ kmax`.
///
/// Requires `2 kmax < n` so that each returned wave vector owns a distinct
/// grid frequency.
pub fn analyze(values: &[f64], n: usize, kmax: u32) -> Vec<(WaveVector, Complex64)> {
    assert!(2 * (kmax as usize) < n, "grid too coarse for kmax");
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft3(&mut buf, n, FftDirection::Forward);
    let norm = 1.0 / (n * n * n) as f64;
    let r = kmax as i32;
    let mut out = Vec::with_capacity(((2 * r + 1) as usize).pow(3));
    for k1 in -r..=r {
        for k2 in -r..=r {
            for k3 in -r..=r {
                let idx = (wrap_index(k1, n) * n + wrap_index(k2, n)) * n + wrap_index(k3, n);
                out.push((WaveVector::new(k1, k2, k3), buf[idx] * norm));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesis_matches_direct_sum() {
        let n = 6;
        let modes = vec![
            (WaveVector::new(1, 0, -2), Complex64::new(0.3, -0.1)),
            (WaveVector::new(0, 2, 1), Complex64::new(-0.5, 0.7)),
            (WaveVector::new(4, 0, 0), Complex64::new(0.2, 0.0)),
        ];
        let vals = synthesize(modes.iter().map(|(k, c)| (k, c)), n);
        for (idx, v) in vals.iter().enumerate() {
            let x = grid_point(idx, n);
            let direct: Complex64 = modes
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, k.dot(&x)))
                .sum();
            assert!((v - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn analysis_inverts_synthesis() {
        let n = 8;
        let k = WaveVector::new(2, -1, 3);
        let c = Complex64::new(0.25, -0.75);
        let modes = vec![(k, c), (-k, c.conj())];
        let vals = synthesize_real(modes.iter().map(|(k, c)| (k, c)), n);
        let coeffs = analyze(&vals, n, 3);
        for (q, z) in coeffs {
            let expected = if q == k {
                c
            } else if q == -k {
                c.conj()
            } else {
                Complex64::default()
            };
            assert!((z - expected).norm() < 1e-14, "{q}: {z}");
        }
    }

    #[test]
    fn grid_point_layout() {
        let n = 4;
        let x = grid_point((1 * n + 2) * n + 3, n);
        assert_eq!(x, [TAU / 4.0, TAU / 2.0, 3.0 * TAU / 4.0]);
    }
}
