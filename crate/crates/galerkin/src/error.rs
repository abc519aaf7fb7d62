use thiserror::Error;

#[derive(Debug, Error)]
pub enum GalerkinError {
    #[error("metric is not positive definite at {x:?} (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64, x: [f64; 3] },
    #[error("eigenvalue {eigenvalue} lies within {distance:e} of the window endpoint {endpoint}")]
    WindowTouchesSpectrum { eigenvalue: f64, endpoint: f64, distance: f64 },
    #[error("eigenvalue {eigenvalue} lies within {distance:e} of the contour")]
    IllConditionedContour { eigenvalue: f64, distance: f64 },
    #[error("projector trace {trace} does not match the cluster size {expected}")]
    ClusterLeakage { trace: f64, expected: usize },
    #[error("vector is not an eigenvector of the first-order matrix (residual {residual:e})")]
    DegenerateDirection { residual: f64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Contact(#[from] beltrami_contact::ContactError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GalerkinError>;
