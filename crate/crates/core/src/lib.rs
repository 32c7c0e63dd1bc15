//! Numerical verification of curvature identities for the quarter-symmetric
//! metric connection on almost Hermitian and Kähler charts.

pub mod connections;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod residual;
pub mod tensor;

pub use error::{Error, Result};
pub use geometry::{DiffConfig, DiffScheme, GeneratorField, ManifoldSpec, Point, TensorField};
pub use residual::Residual;
pub use tensor::{einsum, Signature, Tensor, Variance};
