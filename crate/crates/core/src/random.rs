//! Gaussian random Beltrami fields in a single curl eigenspace.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::field::SpectralVectorField;
use crate::helicity::helicity_basis;

/// Standard normal draw indexed by `(seed, index)`.
///
/// Each index gets its own ChaCha stream, so draws do not depend on the
/// order in which they are requested.
pub fn counter_normal(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.sample(StandardNormal)
}

/// The amplitudes `a_j / √N` used by [`random_beltrami`].
pub fn beltrami_amplitudes(multiplicity: usize, seed: u64) -> Vec<f64> {
    let s = 1.0 / (multiplicity as f64).sqrt();
    (0..multiplicity as u64).map(|j| counter_normal(seed, j) * s).collect()
}

/// `N^{-1/2} Σ a_j u_j` over the helicity basis of shell `n`, with i.i.d.
/// standard normal `a_j`; the expected mean-square norm is 1.
pub fn random_beltrami(n: u32, seed: u64) -> Result<SpectralVectorField> {
    let basis = helicity_basis(n)?;
    let amps = beltrami_amplitudes(basis.len(), seed);
    let radius = basis.iter().map(|u| u.truncation_radius()).max().unwrap_or(0);
    let mut v = SpectralVectorField::zero(radius);
    for (u, a) in basis.iter().zip(amps) {
        v = v.add_scaled(u, a);
    }
    Ok(v)
}
