use thiserror::Error;

use crate::integrator::Trajectory;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("configuration has {} violation(s):\n  {}", .0.len(), .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("blow-up at t = {t}: |u| = {norm:e}")]
    BlowUp { t: f64, norm: f64, partial: Option<Box<Trajectory>> },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("ensemble invalid: {blown_up} of {n_paths} paths blew up (limit 1%)")]
    TooManyBlowUps { blown_up: usize, n_paths: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
