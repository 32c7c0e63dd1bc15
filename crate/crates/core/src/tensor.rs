//! Dense coordinate tensors at a point and the index algebra on them.
//!
//! Components are stored row-major by slot order. A (1,3) curvature tensor
//! uses the slot layout `(out; X, Y, Z)`, so `R[l, i, j, k]` is the `∂_l`
//! component of `R(∂_i, ∂_j)∂_k`. Slots are numbered from zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Whether a slot takes a covector (contravariant, "up") or a vector
/// (covariant, "down").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Up,
    Down,
}

/// Ordered list of slot variances.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    slots: Vec<Variance>,
}

impl Signature {
    pub fn new(slots: Vec<Variance>) -> Self {
        Self { slots }
    }

    /// `up` contravariant slots followed by `down` covariant slots.
    pub fn mixed(up: usize, down: usize) -> Self {
        let mut slots = vec![Variance::Up; up];
        slots.extend(std::iter::repeat_n(Variance::Down, down));
        Self { slots }
    }

    pub fn scalar() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn contravariant_slots(&self) -> usize {
        self.slots.iter().filter(|v| **v == Variance::Up).count()
    }

    pub fn covariant_slots(&self) -> usize {
        self.rank() - self.contravariant_slots()
    }

    pub fn slot(&self, i: usize) -> Option<Variance> {
        self.slots.get(i).copied()
    }

    pub fn slots(&self) -> &[Variance] {
        &self.slots
    }

    pub fn concat(&self, other: &Signature) -> Signature {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        Signature { slots }
    }

    fn with_slot(&self, i: usize, v: Variance) -> Signature {
        let mut slots = self.slots.clone();
        slots[i] = v;
        Signature { slots }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})[", self.contravariant_slots(), self.covariant_slots())?;
        for v in &self.slots {
            f.write_str(match v {
                Variance::Up => "^",
                Variance::Down => "_",
            })?;
        }
        f.write_str("]")
    }
}

/// A dense real tensor over an `n`-dimensional coordinate basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    signature: Signature,
    data: Vec<f64>,
}

fn component_count(dim: usize, rank: usize) -> usize {
    dim.pow(rank as u32)
}

impl Tensor {
    /// Validating constructor: component count must be `n^rank` and every
    /// entry finite.
    pub fn new(dim: usize, signature: Signature, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        let expected = component_count(dim, signature.rank());
        if data.len() != expected {
            return Err(Error::ComponentCount {
                expected,
                actual: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, signature, data })
    }

    pub fn zeros(dim: usize, signature: Signature) -> Self {
        let len = component_count(dim, signature.rank());
        Self {
            dim,
            signature,
            data: vec![0.0; len],
        }
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(dim: usize, signature: Signature, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let rank = signature.rank();
        let len = component_count(dim, rank);
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; rank];
        for _ in 0..len {
            data.push(f(&idx));
            increment(&mut idx, dim);
        }
        Self { dim, signature, data }
    }

    /// The identity endomorphism `δ^i_j` as a (1,1) tensor.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, Signature::mixed(1, 1), |i| if i[0] == i[1] { 1.0 } else { 0.0 })
    }

    pub fn covector(components: &[f64]) -> Result<Self> {
        Self::new(components.len(), Signature::mixed(0, 1), components.to_vec())
    }

    pub fn vector(components: &[f64]) -> Result<Self> {
        Self::new(components.len(), Signature::mixed(1, 0), components.to_vec())
    }

    /// Square matrix as a tensor with the given two-slot signature.
    pub fn matrix(dim: usize, signature: Signature, rows: &[f64]) -> Result<Self> {
        if signature.rank() != 2 {
            return Err(Error::SignatureMismatch(format!(
                "matrix needs two slots, got {signature}"
            )));
        }
        Self::new(dim, signature, rows.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rank(&self) -> usize {
        self.signature.rank()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    /// Component at a multi-index. Panics on a malformed index.
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.rank(), "index rank mismatch");
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        self.data[self.offset(idx)]
    }

    pub fn scale(&self, alpha: f64) -> Tensor {
        Tensor {
            dim: self.dim,
            signature: self.signature.clone(),
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    /// `alpha * a + beta * b`.
    pub fn combine(alpha: f64, a: &Tensor, beta: f64, b: &Tensor) -> Result<Tensor> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch {
                expected: a.dim,
                actual: b.dim,
            });
        }
        if a.signature != b.signature {
            return Err(Error::SignatureMismatch(format!("{} vs {}", a.signature, b.signature)));
        }
        Ok(Tensor {
            dim: a.dim,
            signature: a.signature.clone(),
            data: a.data.iter().zip(&b.data).map(|(x, y)| alpha * x + beta * y).collect(),
        })
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Multi-indices and values of entries with `|value| > threshold`.
    pub fn nonzero(&self, threshold: f64) -> Vec<(Vec<usize>, f64)> {
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.rank()];
        for &v in &self.data {
            if v.abs() > threshold {
                out.push((idx.clone(), v));
            }
            increment(&mut idx, self.dim);
        }
        out
    }

    /// Reorders slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor> {
        let rank = self.rank();
        let mut seen = vec![false; rank];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::SignatureMismatch(format!(
                "{perm:?} is not a permutation of {rank} slots"
            )));
        }
        let signature = Signature::new(perm.iter().map(|&p| self.signature.slots[p]).collect());
        let mut src = vec![0usize; rank];
        Ok(Tensor::from_fn(self.dim, signature, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.data[self.offset(&src)]
        }))
    }

    /// Swaps the two slots of a rank-2 tensor.
    pub fn transpose(&self) -> Tensor {
        assert_eq!(self.rank(), 2, "transpose needs a rank-2 tensor");
        self.permute(&[1, 0]).expect("rank checked")
    }
}

fn increment(idx: &mut [usize], dim: usize) {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < dim {
            return;
        }
        *d = 0;
    }
}

fn same_shape(a: &Tensor, b: &Tensor, op: &str) {
    assert!(
        a.dim == b.dim && a.signature == b.signature,
        "{op}: shape mismatch {} (n={}) vs {} (n={})",
        a.signature,
        a.dim,
        b.signature,
        b.dim
    );
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        same_shape(self, rhs, "add");
        Tensor {
            dim: self.dim,
            signature: self.signature.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        same_shape(self, rhs, "sub");
        Tensor {
            dim: self.dim,
            signature: self.signature.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for Tensor {
    type Output = Tensor;
    fn add(self, rhs: Tensor) -> Tensor {
        &self + &rhs
    }
}

impl Sub for Tensor {
    type Output = Tensor;
    fn sub(self, rhs: Tensor) -> Tensor {
        &self - &rhs
    }
}

impl Add<&Tensor> for Tensor {
    type Output = Tensor;
    fn add(mut self, rhs: &Tensor) -> Tensor {
        same_shape(&self, rhs, "add");
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub<&Tensor> for Tensor {
    type Output = Tensor;
    fn sub(mut self, rhs: &Tensor) -> Tensor {
        same_shape(&self, rhs, "sub");
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(-1.0)
    }
}

impl Neg for Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(-1.0)
    }
}

impl Mul<&Tensor> for f64 {
    type Output = Tensor;
    fn mul(self, rhs: &Tensor) -> Tensor {
        rhs.scale(self)
    }
}

impl Mul<Tensor> for f64 {
    type Output = Tensor;
    fn mul(self, rhs: Tensor) -> Tensor {
        rhs.scale(self)
    }
}

/// Outer product; slots of `a` come first.
pub fn tensor_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: b.dim,
        });
    }
    let mut data = Vec::with_capacity(a.data.len() * b.data.len());
    for x in &a.data {
        data.extend(b.data.iter().map(|y| x * y));
    }
    Ok(Tensor {
        dim: a.dim,
        signature: a.signature.concat(&b.signature),
        data,
    })
}

/// Sums a contravariant slot against a covariant slot, removing both.
pub fn contract(t: &Tensor, up_slot: usize, down_slot: usize) -> Result<Tensor> {
    let rank = t.rank();
    for slot in [up_slot, down_slot] {
        if slot >= rank {
            return Err(Error::SlotOutOfRange { slot, slots: rank });
        }
    }
    if up_slot == down_slot {
        return Err(Error::SlotKind("cannot contract a slot with itself".into()));
    }
    if t.signature.slots[up_slot] != Variance::Up || t.signature.slots[down_slot] != Variance::Down {
        return Err(Error::SlotKind(format!(
            "slot {up_slot} must be contravariant and slot {down_slot} covariant in {}",
            t.signature
        )));
    }
    let kept: Vec<usize> = (0..rank).filter(|&s| s != up_slot && s != down_slot).collect();
    let signature = Signature::new(kept.iter().map(|&s| t.signature.slots[s]).collect());
    let mut src = vec![0usize; rank];
    Ok(Tensor::from_fn(t.dim, signature, |idx| {
        for (k, &s) in kept.iter().enumerate() {
            src[s] = idx[k];
        }
        (0..t.dim)
            .map(|c| {
                src[up_slot] = c;
                src[down_slot] = c;
                t.data[t.offset(&src)]
            })
            .sum()
    }))
}

fn check_metric(g: &Tensor, dim: usize, expected: Variance) -> Result<()> {
    if g.dim != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: g.dim,
        });
    }
    if g.signature.slots != [expected, expected] {
        return Err(Error::SignatureMismatch(format!(
            "metric must be a two-slot tensor of uniform variance, got {}",
            g.signature
        )));
    }
    Ok(())
}

/// Replaces slot `slot` by `Σ_a m[idx_s, a] T[.., a, ..]`, keeping its position.
fn transform_slot(t: &Tensor, slot: usize, m: &[f64], variance: Variance) -> Tensor {
    let n = t.dim;
    let signature = t.signature.with_slot(slot, variance);
    let mut src = vec![0usize; t.rank()];
    Tensor::from_fn(n, signature, |idx| {
        src.copy_from_slice(idx);
        let row = idx[slot];
        (0..n)
            .map(|a| {
                src[slot] = a;
                m[row * n + a] * t.data[t.offset(&src)]
            })
            .sum()
    })
}

/// Lowers contravariant slot `slot` with `g`, keeping its position.
pub fn lower_slot(t: &Tensor, slot: usize, g: &Tensor) -> Result<Tensor> {
    check_metric(g, t.dim, Variance::Down)?;
    match t.signature.slot(slot) {
        None => Err(Error::SlotOutOfRange { slot, slots: t.rank() }),
        Some(Variance::Down) => Err(Error::SlotKind(format!("slot {slot} is already covariant"))),
        Some(Variance::Up) => Ok(transform_slot(t, slot, &g.data, Variance::Down)),
    }
}

/// Raises covariant slot `slot` with the inverse metric, keeping its position.
pub fn raise_slot(t: &Tensor, slot: usize, g_inv: &Tensor) -> Result<Tensor> {
    check_metric(g_inv, t.dim, Variance::Up)?;
    match t.signature.slot(slot) {
        None => Err(Error::SlotOutOfRange { slot, slots: t.rank() }),
        Some(Variance::Up) => Err(Error::SlotKind(format!("slot {slot} is already contravariant"))),
        Some(Variance::Down) => Ok(transform_slot(t, slot, &g_inv.data, Variance::Up)),
    }
}

/// Lowers the first contravariant slot.
pub fn lower_first(t: &Tensor, g: &Tensor) -> Result<Tensor> {
    let slot = t
        .signature
        .slots
        .iter()
        .position(|v| *v == Variance::Up)
        .ok_or_else(|| Error::SlotKind("tensor has no contravariant slot".into()))?;
    lower_slot(t, slot, g)
}

/// Raises the first covariant slot.
pub fn raise_first(t: &Tensor, g_inv: &Tensor) -> Result<Tensor> {
    let slot = t
        .signature
        .slots
        .iter()
        .position(|v| *v == Variance::Down)
        .ok_or_else(|| Error::SlotKind("tensor has no covariant slot".into()))?;
    raise_slot(t, slot, g_inv)
}

/// Composes slot `slot` with the endomorphism `a`.
///
/// On a covariant slot the argument is precomposed, so `B(AX, Y)` is
/// `apply_endo(B, A, 0)`. On a contravariant slot the output is
/// postcomposed, so `A R(X,Y)Z` is `apply_endo(R, A, 0)` for a (1,3) `R`.
pub fn apply_endo(t: &Tensor, a: &Tensor, slot: usize) -> Result<Tensor> {
    if a.dim != t.dim {
        return Err(Error::DimensionMismatch {
            expected: t.dim,
            actual: a.dim,
        });
    }
    if a.signature != Signature::mixed(1, 1) {
        return Err(Error::SignatureMismatch(format!(
            "endomorphism must be (1,1), got {}",
            a.signature
        )));
    }
    match t.signature.slot(slot) {
        None => Err(Error::SlotOutOfRange { slot, slots: t.rank() }),
        Some(Variance::Up) => Ok(transform_slot(t, slot, &a.data, Variance::Up)),
        Some(Variance::Down) => {
            // B'(.., e_i, ..) = B(.., A e_i, ..) = Σ_a A^a_i B(.., e_a, ..)
            let a_t = a.transpose();
            Ok(transform_slot(t, slot, &a_t.data, Variance::Down))
        }
    }
}

/// Inverts a symmetric (0,2) metric, rejecting it when the 1-norm condition
/// estimate exceeds `max_condition`.
pub fn invert_metric(g: &Tensor, max_condition: f64) -> Result<Tensor> {
    check_metric(g, g.dim, Variance::Down)?;
    let n = g.dim;
    let inv = invert_matrix(&g.data, n).ok_or(Error::SingularMetric(f64::INFINITY))?;
    let norm1 = |m: &[f64]| {
        (0..n)
            .map(|j| (0..n).map(|i| m[i * n + j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let cond = norm1(&g.data) * norm1(&inv);
    if !cond.is_finite() || cond > max_condition {
        return Err(Error::SingularMetric(cond));
    }
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (g.data[i * n + j], g.data[j * n + i]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return Err(Error::SignatureMismatch("metric is not symmetric".into()));
            }
        }
    }
    Tensor::new(n, Signature::mixed(2, 0), inv)
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub(crate) fn invert_matrix(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))?;
        let p = a[pivot * n + col];
        if p.abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
                inv.swap(pivot * n + j, col * n + j);
            }
        }
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f != 0.0 {
                for j in 0..n {
                    a[r * n + j] -= f * a[col * n + j];
                    inv[r * n + j] -= f * inv[col * n + j];
                }
            }
        }
    }
    Some(inv)
}

/// Index-notation kernel, e.g. `einsum("xy,lz->lxyz", &[&b, &a])`.
///
/// Letters repeated across or within operands and absent from the output are
/// summed. Each output slot takes the variance of the first operand slot that
/// carries its letter.
pub fn einsum(spec: &str, operands: &[&Tensor]) -> Result<Tensor> {
    let (lhs, rhs) = spec
        .split_once("->")
        .ok_or_else(|| Error::Einsum(format!("missing '->' in {spec:?}")))?;
    let inputs: Vec<Vec<char>> = lhs.split(',').map(|s| s.trim().chars().collect()).collect();
    let output: Vec<char> = rhs.trim().chars().collect();
    if inputs.len() != operands.len() {
        return Err(Error::Einsum(format!(
            "{spec:?} names {} operands, got {}",
            inputs.len(),
            operands.len()
        )));
    }
    let dim = operands
        .first()
        .map(|t| t.dim)
        .ok_or_else(|| Error::Einsum("no operands".into()))?;
    for (letters, t) in inputs.iter().zip(operands) {
        if t.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: t.dim,
            });
        }
        if letters.len() != t.rank() {
            return Err(Error::Einsum(format!("operand {letters:?} has rank {}", t.rank())));
        }
    }

    let mut letters: Vec<char> = Vec::new();
    for &c in &output {
        if letters.contains(&c) {
            return Err(Error::Einsum(format!("output letter {c:?} repeated")));
        }
        letters.push(c);
    }
    let n_out = letters.len();
    for input in &inputs {
        for &c in input {
            if !letters.contains(&c) {
                letters.push(c);
            }
        }
    }
    let mut out_variance = Vec::with_capacity(n_out);
    for &c in &output {
        let v = inputs
            .iter()
            .zip(operands)
            .find_map(|(inp, t)| inp.iter().position(|&x| x == c).map(|s| t.signature.slots[s]))
            .ok_or_else(|| Error::Einsum(format!("output letter {c:?} not in any operand")))?;
        out_variance.push(v);
    }

    // strides[op][letter]
    let strides: Vec<Vec<usize>> = inputs
        .iter()
        .map(|inp| {
            let rank = inp.len();
            let mut s = vec![0usize; letters.len()];
            for (pos, c) in inp.iter().enumerate() {
                let li = letters.iter().position(|x| x == c).expect("letter registered");
                s[li] += dim.pow((rank - 1 - pos) as u32);
            }
            s
        })
        .collect();

    let n_sum = letters.len() - n_out;
    let out_len = component_count(dim, n_out);
    let inner_len = component_count(dim, n_sum);
    let mut data = vec![0.0; out_len];
    let mut digits = vec![0usize; letters.len()];
    let mut offsets = vec![0usize; operands.len()];
    for slot in data.iter_mut() {
        let mut acc = 0.0;
        for _ in 0..inner_len {
            let mut prod = 1.0;
            for (t, &off) in operands.iter().zip(&offsets) {
                prod *= t.data[off];
            }
            acc += prod;
            step(&mut digits, &mut offsets, &strides, n_out, letters.len(), dim);
        }
        *slot = acc;
        if n_out > 0 {
            step(&mut digits, &mut offsets, &strides, 0, n_out, dim);
        }
    }
    Ok(Tensor {
        dim,
        signature: Signature::new(out_variance),
        data,
    })
}

/// Odometer increment over `digits[lo..hi]`, keeping operand offsets in sync.
fn step(digits: &mut [usize], offsets: &mut [usize], strides: &[Vec<usize>], lo: usize, hi: usize, dim: usize) {
    for p in (lo..hi).rev() {
        digits[p] += 1;
        for (off, s) in offsets.iter_mut().zip(strides) {
            *off += s[p];
        }
        if digits[p] < dim {
            return;
        }
        digits[p] = 0;
        for (off, s) in offsets.iter_mut().zip(strides) {
            *off -= dim * s[p];
        }
    }
}
