use thiserror::Error;

use crate::orbits::OrbitClass;

pub type Result<T> = std::result::Result<T, KtError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KtError {
    #[error("tensor parameters are all zero")]
    ZeroTensor,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular point ({x}, {y}): {constraint}")]
    SingularPoint { x: f64, y: f64, constraint: String },
    #[error("length mismatch: {coeffs} coefficients for {tensors} tensors")]
    LengthMismatch { coeffs: usize, tensors: usize },
    #[error("tensor has no foci (b6 = 0)")]
    NoFoci,
    #[error("no moving frame for orbit class {0:?}")]
    NotCanonizable(OrbitClass),
    #[error("exact backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("basis vector {index} failed validation: residual {residual:e} > {threshold:e}")]
    ValidationFailed {
        index: usize,
        residual: f64,
        threshold: f64,
    },
    #[error("could not find {wanted} valid sample points ({found} found)")]
    SamplingExhausted { wanted: usize, found: usize },
    #[error("tensor is not compatible with the potential: residual {residual:e}")]
    NotCompatible { residual: f64 },
    #[error("no integration path avoids the singular set")]
    PathThroughSingularity,
    #[error("custom potential returned an asymmetric Hessian: {vxy} vs {vyx}")]
    AsymmetricHessian { vxy: f64, vyx: f64 },
}

impl KtError {
    /// Validation failures are reported separately from domain errors by the CLI.
    pub fn is_validation(&self) -> bool {
        matches!(self, KtError::ValidationFailed { .. })
    }
}
