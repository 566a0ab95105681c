//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library. Numeric payloads are carried as `f64`
/// regardless of the working scalar type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature order {order} out of range (1..=200)")]
    QuadratureOrder { order: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("eigensolver failed to converge in block {block} (row {row})")]
    EigenNonConvergence { block: String, row: usize },

    #[error("lost track at step {step}: best overlap {best_overlap} <= threshold")]
    LostTrack { step: usize, best_overlap: f64 },

    #[error("momentum eigenstate undefined: omega_p <= 0 at p_y = {p_y}")]
    OmegaPDomain { p_y: f64 },

    #[error("no positive root of the variational quartic")]
    NoPositiveRoot,

    #[error("momentum grid norm {norm} drifted beyond tolerance {tolerance}; grid or quadrature order too small")]
    NormalizationDrift { norm: f64, tolerance: f64 },

    #[error("negative probability density {value}")]
    NegativeDensity { value: f64 },

    #[error("grid too small: boundary density {boundary_density} exceeds 1e-12")]
    GridTooSmall { boundary_density: f64 },

    #[error("design matrix is rank-deficient; cannot fit")]
    SingularFit,

    #[error("records share no common alpha values across methods")]
    NoCommonAlphas,

    #[error("fit requires records from a single method, found {0}")]
    MixedMethods(usize),

    #[error("not enough records: need at least {needed}, got {got}")]
    NotEnoughData { needed: usize, got: usize },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
