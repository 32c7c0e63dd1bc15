//! Shared fixtures for the kernel benchmarks.

use qsc_core::geometry::fubini_study;
use qsc_core::{GeneratorField, ManifoldSpec, Point, Signature, Tensor};

/// Fubini-Study chart of complex dimension `k`, a generic interior point
/// and a seeded generator.
pub fn fixture(k: usize) -> (ManifoldSpec, Point, GeneratorField) {
    let m = fubini_study(k).expect("k within range");
    let p = m.sample_points(1, 11).remove(0);
    let pi = GeneratorField::random_poly(m.dim(), 3);
    (m, p, pi)
}

/// Dense (1,3) tensor with deterministic, non-repeating entries.
pub fn dense_curvature_like(n: usize) -> Tensor {
    Tensor::from_fn(n, Signature::mixed(1, 3), |idx| {
        idx.iter()
            .enumerate()
            .map(|(s, &i)| ((s + 1) * (i + 2)) as f64)
            .sum::<f64>()
            .sin()
    })
}

pub fn dense_covector(n: usize) -> Tensor {
    Tensor::from_fn(n, Signature::mixed(0, 1), |idx| 0.5 + idx[0] as f64 * 0.25)
}
