//! The catalog of generator 1-forms `π`.
//!
//! Every catalog generator is a covector field with polynomial components of
//! degree at most two, `π_i = c_i + b_ij u^j + q_ijk u^j u^k`, so closed-form
//! partials are exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::diff::TensorField;
use super::Point;
use crate::error::{Error, Result};
use crate::tensor::{Signature, Tensor};

pub const GENERATOR_NAMES: [&str; 5] = ["zero", "const", "linear_j", "grad", "random_poly"];

/// Scalars whose differentials are available as `grad` generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarPotential {
    /// `f = x₁² + y₁²`.
    Z1Squared,
    /// `f = x₁²y₁ + x₁y₁²`.
    Cubic,
}

impl ScalarPotential {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "" | "x1sq" => Ok(Self::Z1Squared),
            "cubic" => Ok(Self::Cubic),
            _ => Err(Error::InvalidConfig(format!(
                "unknown scalar '{s}' for grad (valid: x1sq, cubic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorField {
    label: String,
    n: usize,
    c: Vec<f64>,
    /// `b[i*n + j]`: coefficient of `u^j` in `π_i`.
    b: Vec<f64>,
    /// `q[(i*n + j)*n + k]`, symmetric in `(j, k)`.
    q: Vec<f64>,
}

impl GeneratorField {
    fn empty(label: String, n: usize) -> Self {
        Self {
            label,
            n,
            c: vec![0.0; n],
            b: vec![0.0; n * n],
            q: vec![0.0; n * n * n],
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::empty("zero".into(), n)
    }

    /// Constant components; missing trailing components are zero.
    pub fn constant(n: usize, components: &[f64]) -> Result<Self> {
        if components.len() > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: components.len(),
            });
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let label = format!(
            "const:{}",
            components.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/")
        );
        let mut g = Self::empty(label, n);
        g.c[..components.len()].copy_from_slice(components);
        Ok(g)
    }

    /// `π = Σ_a (x_a dy_a − y_a dx_a)`.
    pub fn linear_j(n: usize) -> Self {
        let mut g = Self::empty("linear_j".into(), n);
        for a in 0..n / 2 {
            let (x, y) = (2 * a, 2 * a + 1);
            g.b[y * n + x] = 1.0;
            g.b[x * n + y] = -1.0;
        }
        g
    }

    /// `π = df`.
    pub fn grad(n: usize, f: ScalarPotential) -> Self {
        let mut g;
        match f {
            ScalarPotential::Z1Squared => {
                g = Self::empty("grad:x1sq".into(), n);
                g.b[0] = 2.0;
                g.b[n + 1] = 2.0;
            }
            ScalarPotential::Cubic => {
                g = Self::empty("grad:cubic".into(), n);
                // π_x = 2xy + y², π_y = x² + 2xy
                g.set_monomial(0, 0, 1, 2.0);
                g.set_monomial(0, 1, 1, 1.0);
                g.set_monomial(1, 0, 0, 1.0);
                g.set_monomial(1, 0, 1, 2.0);
            }
        }
        g
    }

    /// Components with seeded coefficients drawn uniformly from `[−1, 1]`.
    pub fn random_poly(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty(format!("random_poly:{seed}"), n);
        for i in 0..n {
            g.c[i] = rng.gen_range(-1.0..=1.0);
        }
        for v in g.b.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let a = rng.gen_range(-1.0..=1.0);
                    g.set_monomial(i, j, k, a);
                }
            }
        }
        g
    }

    /// Sets the coefficient of the monomial `u^j u^k` in `π_i`.
    fn set_monomial(&mut self, i: usize, j: usize, k: usize, coeff: f64) {
        let n = self.n;
        if j == k {
            self.q[(i * n + j) * n + j] = coeff;
        } else {
            self.q[(i * n + j) * n + k] = coeff / 2.0;
            self.q[(i * n + k) * n + j] = coeff / 2.0;
        }
    }

    /// Parses `name[:param]`: `zero`, `const[:c1/c2/…]`, `linear_j`,
    /// `grad[:x1sq|cubic]`, `random_poly[:seed]`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let (name, param) = match spec.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (spec.trim(), None),
        };
        match name {
            "zero" => Ok(Self::zero(n)),
            "const" => {
                let comps = match param {
                    None => (0..n)
                        .map(|i| 0.5f64.powi(i as i32) * if i % 2 == 0 { 1.0 } else { -1.0 })
                        .collect(),
                    Some(p) => p
                        .split('/')
                        .map(|s| {
                            s.parse::<f64>()
                                .map_err(|_| Error::InvalidConfig(format!("bad const component '{s}'")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                };
                Self::constant(n, &comps)
            }
            "linear_j" => Ok(Self::linear_j(n)),
            "grad" => Ok(Self::grad(n, ScalarPotential::parse(param.unwrap_or(""))?)),
            "random_poly" => {
                let seed = match param {
                    None => 1,
                    Some(p) => p
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidConfig(format!("bad random_poly seed '{p}'")))?,
                };
                Ok(Self::random_poly(n, seed))
            }
            _ => Err(Error::UnknownGenerator {
                name: spec.to_string(),
                valid: GENERATOR_NAMES.join(", "),
            }),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().chain(&self.b).chain(&self.q).all(|x| *x == 0.0)
    }

    fn gradient_entry(&self, u: &[f64], m: usize, i: usize) -> f64 {
        let n = self.n;
        self.b[i * n + m] + 2.0 * (0..n).map(|k| self.q[(i * n + m) * n + k] * u[k]).sum::<f64>()
    }

    /// `∂_m π_i` with slots `(m, i)`.
    pub fn jacobian(&self, p: &Point) -> Tensor {
        Tensor::from_fn(self.n, Signature::mixed(0, 2), |x| {
            self.gradient_entry(&p.0, x[0], x[1])
        })
    }
}

impl TensorField for GeneratorField {
    fn dim(&self) -> usize {
        self.n
    }

    fn signature(&self) -> Signature {
        Signature::mixed(0, 1)
    }

    fn value(&self, p: &Point) -> Result<Tensor> {
        let n = self.n;
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: p.dim(),
            });
        }
        let u = &p.0;
        let comps: Vec<f64> = (0..n)
            .map(|i| {
                let lin: f64 = (0..n).map(|j| self.b[i * n + j] * u[j]).sum();
                let quad: f64 = (0..n)
                    .flat_map(|j| (0..n).map(move |k| (j, k)))
                    .map(|(j, k)| self.q[(i * n + j) * n + k] * u[j] * u[k])
                    .sum();
                self.c[i] + lin + quad
            })
            .collect();
        Tensor::covector(&comps)
    }

    fn analytic_derivative(&self, p: &Point, order: usize) -> Option<Result<Tensor>> {
        let n = self.n;
        match order {
            1 => Some(Ok(self.jacobian(p))),
            2 => Some(Ok(Tensor::from_fn(n, Signature::mixed(0, 3), |x| {
                2.0 * self.q[(x[2] * n + x[0]) * n + x[1]]
            }))),
            _ => None,
        }
    }
}
