use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("no section crossings before t = {budget}")]
    NoCrossings { budget: f64 },
    #[error("only {found} of {requested} section crossings before the time budget ran out")]
    BudgetExhausted { found: usize, requested: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = DynamicsError> = std::result::Result<T, E>;
