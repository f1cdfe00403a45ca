use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by maps, systems and detectors.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum IfsError {
    #[error("{0} has no inverse")]
    NonInvertible(String),

    #[error("map is not differentiable at {at} (one-sided slopes {left} and {right})")]
    NotDifferentiable { at: f64, left: f64, right: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("no expanding word found at {point} (best |derivative| {best_derivative})")]
    NotLocallyExpanding { point: f64, best_derivative: f64 },

    #[error("point {point} is not covered by any arc")]
    NotACover { point: f64 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, IfsError>;
