use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContactError {
    #[error("metric is not positive definite at x = {x:?} (ε = {epsilon})")]
    NotPositiveDefinite { epsilon: f64, x: [f64; 3] },
    #[error("the base metric must have constant coefficients")]
    NonConstantBase,
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ContactError> = std::result::Result<T, E>;
