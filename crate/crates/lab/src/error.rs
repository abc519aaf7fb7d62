use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("computation failed: {0}")]
    ComputeFailure(String),
}

impl LabError {
    /// 2 for configuration problems, 1 for everything that fails later.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::ConfigInvalid(_) => 2,
            LabError::ComputeFailure(_) => 1,
        }
    }

    pub fn compute<E: std::fmt::Display>(e: E) -> Self {
        LabError::ComputeFailure(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
