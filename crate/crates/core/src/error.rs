use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: fields live on different grids")]
    GridMismatch,

    #[error("invalid mass model: {0}")]
    InvalidModel(String),

    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("{0}")]
    Precondition(String),

    #[error("non-finite value in field at step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },

    #[error("centroid undefined: total weight {0:e} below threshold")]
    EmptyField(f64),

    #[error("centroid drift {drift:e} is below the noise threshold {threshold:e}")]
    NoDrift { drift: f64, threshold: f64 },

    #[error("power-law fit needs at least 3 positive points, got {0}")]
    TooFewPoints(usize),

    #[error("power-law fit input must be positive: ({0}, {1})")]
    NonPositive(f64, f64),

    #[error("configuration invalid:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
