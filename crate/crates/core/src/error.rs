use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid coefficient: {0}")]
    InvalidRho(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("quadrature did not converge on [{lo}, {hi}] (estimate {estimate}, error {error})")]
    Quadrature { lo: f64, hi: f64, estimate: f64, error: f64 },
    #[error("integrand returned NaN at x = {0}")]
    NotANumber(f64),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("level set resolution failed: {0}")]
    LevelSet(String),
    #[error("optimizer: {0}")]
    Optimizer(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
