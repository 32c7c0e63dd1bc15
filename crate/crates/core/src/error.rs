use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("component count {actual} does not match n^slots = {expected}")]
    ComponentCount { expected: usize, actual: usize },

    #[error("slot {slot} out of range for a tensor with {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },

    #[error("slot kind mismatch: {0}")]
    SlotKind(String),

    #[error("non-finite component encountered")]
    NonFinite,

    #[error("metric is singular or ill-conditioned (condition estimate {0:.3e})")]
    SingularMetric(f64),

    #[error("point {0:?} lies outside the chart domain")]
    OutsideDomain(Vec<f64>),

    #[error("finite-difference stencil leaves the domain near {0:?}")]
    StencilOutsideDomain(Vec<f64>),

    #[error("unknown generator '{name}' (valid: {valid})")]
    UnknownGenerator { name: String, valid: String },

    #[error("unknown manifold '{name}' (valid: {valid})")]
    UnknownManifold { name: String, valid: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("einsum: {0}")]
    Einsum(String),
}
