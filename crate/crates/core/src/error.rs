//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension {0} unsupported (expected 1, 2, or 3)")]
    BadDimension(usize),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "grid too coarse: {points} spatial points per axis but support needs at least {needed}"
    )]
    AliasedGrid { points: usize, needed: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("exponent fit needs positive values, got {0}")]
    NonPositiveValue(f64),

    #[error("numerical blow-up at step {step}: sup-norm {sup:.3e} exceeds threshold {threshold:.3e}")]
    BlowUp { step: usize, sup: f64, threshold: f64 },

    #[error("non-finite value detected at step {0}")]
    NonFinite(usize),

    #[error("fixture parse error: {0}")]
    Fixture(String),
}
