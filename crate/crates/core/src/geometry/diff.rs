//! Coordinate partial derivatives of tensor fields.
//!
//! Second derivatives come from direct two-dimensional stencils on the field
//! itself; nesting first-derivative stencils is never used.

use super::Point;
use crate::error::{Error, Result};
use crate::tensor::{Signature, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffScheme {
    /// Closed-form partials where the field provides them.
    Analytic,
    Fd2,
    Fd4,
}

impl DiffScheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "fd2" => Ok(Self::Fd2),
            "fd4" => Ok(Self::Fd4),
            _ => Err(Error::InvalidConfig(format!(
                "unknown differentiation scheme '{s}' (valid: analytic, fd2, fd4)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::Fd2 => "fd2",
            Self::Fd4 => "fd4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub scheme: DiffScheme,
    pub step: f64,
    pub richardson: bool,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            scheme: DiffScheme::Analytic,
            step: 1e-4,
            richardson: false,
        }
    }
}

impl DiffConfig {
    pub const MIN_STEP: f64 = 1e-7;
    pub const MAX_STEP: f64 = 1e-2;

    pub fn new(scheme: DiffScheme, step: f64, richardson: bool) -> Result<Self> {
        if !(Self::MIN_STEP..=Self::MAX_STEP).contains(&step) {
            return Err(Error::InvalidConfig(format!(
                "step {step:e} outside [{:e}, {:e}]",
                Self::MIN_STEP,
                Self::MAX_STEP
            )));
        }
        Ok(Self {
            scheme,
            step,
            richardson,
        })
    }

    /// The finite-difference order, treating `Analytic` as its fd4 fallback.
    fn fd_order(&self) -> u32 {
        match self.scheme {
            DiffScheme::Fd2 => 2,
            DiffScheme::Fd4 | DiffScheme::Analytic => 4,
        }
    }
}

/// A tensor-valued field on a chart.
pub trait TensorField: Sync {
    fn dim(&self) -> usize;
    fn signature(&self) -> Signature;
    fn value(&self, p: &Point) -> Result<Tensor>;

    /// Domain membership, checked at every stencil point.
    fn contains(&self, _p: &Point) -> bool {
        true
    }

    /// Closed-form partials of the given order, derivative slots first.
    fn analytic_derivative(&self, _p: &Point, _order: usize) -> Option<Result<Tensor>> {
        None
    }
}

/// Wraps a closure as a field without closed-form derivatives.
pub struct FnField<F> {
    dim: usize,
    signature: Signature,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&Point) -> Result<Tensor> + Sync,
{
    pub fn new(dim: usize, signature: Signature, f: F) -> Self {
        Self { dim, signature, f }
    }
}

impl<F> TensorField for FnField<F>
where
    F: Fn(&Point) -> Result<Tensor> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn signature(&self) -> Signature {
        self.signature.clone()
    }
    fn value(&self, p: &Point) -> Result<Tensor> {
        (self.f)(p)
    }
}

const FIRST_FD2: [(f64, f64); 2] = [(-1.0, -0.5), (1.0, 0.5)];
const FIRST_FD4: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];
const SECOND_FD2: [(f64, f64); 3] = [(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)];
const SECOND_FD4: [(f64, f64); 5] = [
    (-2.0, -1.0 / 12.0),
    (-1.0, 16.0 / 12.0),
    (0.0, -30.0 / 12.0),
    (1.0, 16.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

fn eval_checked(field: &dyn TensorField, p: &Point) -> Result<Tensor> {
    if !field.contains(p) {
        return Err(Error::StencilOutsideDomain(p.0.clone()));
    }
    let v = field.value(p)?;
    if v.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(v)
}

fn weighted_sum(field: &dyn TensorField, terms: &[(Point, f64)], scale: f64) -> Result<Tensor> {
    let mut acc = Tensor::zeros(field.dim(), field.signature());
    for (q, w) in terms {
        acc = acc + &eval_checked(field, q)?.scale(*w);
    }
    Ok(acc.scale(scale))
}

fn stencil(field: &dyn TensorField, p: &Point, dirs: &[usize], order: u32, h: f64) -> Result<Tensor> {
    match *dirs {
        [d] => {
            let taps: &[(f64, f64)] = if order == 2 { &FIRST_FD2 } else { &FIRST_FD4 };
            let terms: Vec<_> = taps.iter().map(|&(o, w)| (p.shifted(d, o * h), w)).collect();
            weighted_sum(field, &terms, 1.0 / h)
        }
        [d, e] if d == e => {
            let taps: &[(f64, f64)] = if order == 2 { &SECOND_FD2 } else { &SECOND_FD4 };
            let terms: Vec<_> = taps.iter().map(|&(o, w)| (p.shifted(d, o * h), w)).collect();
            weighted_sum(field, &terms, 1.0 / (h * h))
        }
        [d, e] => {
            let taps: &[(f64, f64)] = if order == 2 { &FIRST_FD2 } else { &FIRST_FD4 };
            let mut terms = Vec::with_capacity(taps.len() * taps.len());
            for &(o1, w1) in taps {
                for &(o2, w2) in taps {
                    terms.push((p.shifted(d, o1 * h).shifted(e, o2 * h), w1 * w2));
                }
            }
            weighted_sum(field, &terms, 1.0 / (h * h))
        }
        _ => Err(Error::InvalidConfig(format!(
            "partials of order {} are not supported",
            dirs.len()
        ))),
    }
}

/// Partial derivative of `field` along the coordinate directions `dirs`
/// (one entry per derivative order, at most two).
pub fn partial(field: &dyn TensorField, p: &Point, dirs: &[usize], cfg: &DiffConfig) -> Result<Tensor> {
    let n = field.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p.dim(),
        });
    }
    if let Some(&d) = dirs.iter().find(|&&d| d >= n) {
        return Err(Error::SlotOutOfRange { slot: d, slots: n });
    }
    if cfg.scheme == DiffScheme::Analytic {
        if let Some(full) = field.analytic_derivative(p, dirs.len()) {
            let full = full?;
            let rest = field.signature().rank();
            return Ok(Tensor::from_fn(n, field.signature(), |idx| {
                let mut i = dirs.to_vec();
                i.extend_from_slice(&idx[..rest]);
                full.get(&i)
            }));
        }
    }
    let order = cfg.fd_order();
    let h = cfg.step;
    let coarse = stencil(field, p, dirs, order, h)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = stencil(field, p, dirs, order, h / 2.0)?;
    let f = 2f64.powi(order as i32);
    Ok((fine.scale(f) - &coarse).scale(1.0 / (f - 1.0)))
}

/// All partials of the given order (1 or 2), derivative slots prepended as
/// covariant slots.
pub fn derivative(field: &dyn TensorField, p: &Point, order: usize, cfg: &DiffConfig) -> Result<Tensor> {
    let n = field.dim();
    let sig = Signature::mixed(0, order).concat(&field.signature());
    if cfg.scheme == DiffScheme::Analytic {
        if let Some(full) = field.analytic_derivative(p, order) {
            let full = full?;
            if full.signature() != &sig {
                return Err(Error::SignatureMismatch(format!(
                    "closed-form partials have signature {}, expected {sig}",
                    full.signature()
                )));
            }
            return Ok(full);
        }
    }
    let block = crate::tensor::Tensor::zeros(n, field.signature()).data().len();
    let mut data = vec![0.0; n.pow(order as u32) * block];
    match order {
        1 => {
            for d in 0..n {
                let t = partial(field, p, &[d], cfg)?;
                data[d * block..(d + 1) * block].copy_from_slice(t.data());
            }
        }
        2 => {
            for d in 0..n {
                for e in d..n {
                    let t = partial(field, p, &[d, e], cfg)?;
                    data[(d * n + e) * block..(d * n + e + 1) * block].copy_from_slice(t.data());
                    data[(e * n + d) * block..(e * n + d + 1) * block].copy_from_slice(t.data());
                }
            }
        }
        _ => {
            return Err(Error::InvalidConfig(format!(
                "partials of order {order} are not supported"
            )))
        }
    }
    Tensor::new(n, sig, data)
}
