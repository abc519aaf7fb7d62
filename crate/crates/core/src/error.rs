use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("no lattice vector has |k|² = {n}; √{n} is not a curl eigenvalue on T³")]
    NoSuchEigenvalue { n: u32 },
    #[error("field nearly vanishes on the grid (min |v| = {min_norm:e})")]
    VanishingField { min_norm: f64 },
    #[error("invalid field data: {0}")]
    InvalidField(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;
