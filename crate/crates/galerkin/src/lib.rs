//! Fourier–Galerkin discretization of `⋆_g d` on 1-forms on T³.
//!
//! The pencil `(B, M)` has `B_ij = ∫ e_i ∧ de_j` (metric independent) and
//! `M_ij = ∫ g(e_i♯, e_j♯) vol_g`; its generalized eigenvalues approximate
//! the spectrum of `⋆_g d`. Along the compatible family `g_ε` the six-fold
//! eigenvalue `λ₀` splits, which is tracked directly, predicted to first
//! order, and certified through the compressed map `π`.

pub mod basis;
pub mod error;
pub mod exterior;
pub mod io;
pub mod mass;
pub mod pencil;
pub mod perturbation;
pub mod pimap;
pub mod projector;
pub mod samples;

pub use basis::{build_basis, BasisElement, FormBasis, Profile};
pub use error::{GalerkinError, Result};
pub use exterior::{assemble_exterior, exterior_integers};
pub use mass::{assemble_mass, assemble_mass_derivative, assemble_weighted, family_mass, family_mass_derivative, mass_grid_size};
pub use pencil::{inv_sqrt_spd, solve_pencil, sqrt_spd, EigenCluster, UNIT_WINDOW, EigenPair, GalerkinPencil};
pub use perturbation::{
    finite_difference_slopes, hellmann_feynman, leading_frame, operator_derivative, pairing_first_order, pencil_first_order,
    track_splitting, FirstOrder, GalerkinFamily, HellmannFeynman, PerturbationProblem, SplittingCurves, DEFAULT_FD_STEP,
};
pub use pimap::{
    cluster_frame, hausdorff, pi_derivative, pi_map, splitting_certificate, ClusterSpec, OperatorFamily, PiMapReport,
    PolynomialFamily,
};
pub use projector::{enclosed_count, spectral_projector, DEFAULT_NODES};
