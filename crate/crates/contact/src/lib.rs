//! A flat-torus contact model and the compatible-metric perturbation
//! machinery built on it.
//!
//! Forms, metrics and tensors are trigonometric polynomials in the
//! coordinates of `T³`, except for the scalar stretch weight of the family
//! `g_ε`, which is kept symbolic and evaluated pointwise.

pub mod contact;
pub mod error;
pub mod metric;
pub mod perturb;
pub mod trig;

pub use contact::{check_compatibility, check_compatibility_on_grid, std_contact_t3, CompatibilityReport, ContactForm, ReebCheck, CONVENTIONAL_LAMBDA0};
pub use error::{ContactError, Result};
pub use metric::{MetricField, MetricTerm, Weight};
pub use perturb::{
    check_variation, l2_pairing, metric_family, noncollinearity_measure, orthogonal_dual, standard_beta, standard_beta_quartic_half, trace_g,
    variation_pairing, variation_pairing_on_grid, variation_tensor, xi_projection, MetricFamily, VariationCheck, VariationTensor,
};
pub use trig::{OneForm, SymTensor, TrigBasis, TrigPoly, TrigTerm};
