//! Streamlines of steady fields on T³ and chaos diagnostics: adaptive
//! Dormand–Prince integration, Poincaré sections, largest Lyapunov
//! exponents, tangent maps and first-integral checks.

pub mod compiled;
pub mod dopri;
pub mod error;
pub mod first_integral;
pub mod io;
pub mod lyapunov;
pub mod section;
pub mod trajectory;

pub use compiled::{wrap, wrap3, CompiledField};
pub use dopri::IntegratorStats;
pub use error::{DynamicsError, Result};
pub use first_integral::{first_integral_report, FirstIntegralReport};
pub use lyapunov::{
    lyapunov_max, lyapunov_max_with_tol, separatrix_seeds, standard_chaos_seeds, threshold_from_estimates, uniform_seed_point,
    LyapunovEstimate, CHAOS_THRESHOLD, INTEGRABLE_CEILING,
};
pub use section::{poincare, CrossingDirection, PoincareSection, SectionOptions, SectionPlane};
pub use trajectory::{det3, integrate, tangent_map, Trajectory, TrajectorySample};
