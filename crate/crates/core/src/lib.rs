//! Fourier-spectral vector fields on the flat torus `T³ = (ℝ/2πℤ)³`.
//!
//! Fields are finite sums `v(x) = Σ v̂(k) e^{ik·x}` over integer wave vectors
//! with `v̂(−k) = conj v̂(k)`. Norms and inner products use the normalized
//! measure, so `‖v‖² = Σ |v̂(k)|²`.
//!
//! The crate covers curl eigenfamilies on lattice shells, the ABC family,
//! Gaussian random Beltrami fields, pointwise proportionality diagnostics
//! and the steady-Euler Bernoulli and pressure solves.

pub mod abc;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod helicity;
pub mod io;
pub mod lattice;
pub mod random;
pub mod scalar;
pub mod steady;

pub use abc::{abc_closed_form, c0_first_integral, make_abc, AbcParams};
pub use diagnostics::{locate_min_norm, min_norm, proportionality_factor, ScalarGridReport, VANISHING_THRESHOLD};
pub use error::{Result, SpectralError};
pub use field::{SpectralVectorField, Vec3c};
pub use helicity::{check_eigenfamily, helicity_basis, helicity_vector, EigenfamilyReport};
pub use io::{field_from_json, field_hash, field_to_json, sha256_hex};
pub use lattice::{lattice_shell, mod8_admissible, Admissibility, EigenShell, WaveVector};
pub use random::random_beltrami;
pub use scalar::ScalarSpectralField;
pub use steady::{bernoulli, pressure, steady_residual, SteadyResidual};
