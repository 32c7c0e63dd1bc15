//! Coordinate charts, the manifold catalog and pointwise metric data.
//!
//! Coordinates on a chart of dimension `n = 2k` are ordered
//! `(x₁, y₁, …, x_k, y_k)`, and every catalog manifold carries the standard
//! structure `A∂x_a = ∂y_a`, `A∂y_a = −∂x_a`, which is constant in these
//! coordinates.

mod diff;
mod generator;

pub use diff::{derivative, partial, DiffConfig, DiffScheme, FnField, TensorField};
pub use generator::{GeneratorField, ScalarPotential, GENERATOR_NAMES};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{apply_endo, invert_metric, Signature, Tensor};

/// Largest chart dimension the lab accepts.
pub const MAX_DIM: usize = 16;

/// Condition-number bound used when inverting metrics.
pub const MAX_METRIC_CONDITION: f64 = 1e12;

/// Names accepted by [`ManifoldSpec::by_name`].
pub const MANIFOLD_NAMES: [&str; 4] = ["flat", "fs", "hyperbolic", "conformal-nonkahler"];

/// Coordinates of a point in a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// `self + t·e_dir`.
    pub(crate) fn shifted(&self, dir: usize, t: f64) -> Point {
        let mut c = self.0.clone();
        c[dir] += t;
        Point(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// All of `R^n`.
    Everywhere,
    /// `Σ(x_a² + y_a²) < bound`.
    Ball { radius_sq: f64 },
}

impl Domain {
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Domain::Everywhere => p.0.iter().all(|x| x.is_finite()),
            Domain::Ball { radius_sq } => p.norm_sq() < *radius_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub n: usize,
    pub domain: Domain,
    pub label: String,
}

impl Chart {
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.n && self.domain.contains(p)
    }

    pub fn coordinate_label(&self, i: usize) -> String {
        let axis = if i.is_multiple_of(2) { "x" } else { "y" };
        format!("{axis}{}", i / 2 + 1)
    }
}

/// Radial Kähler potentials `K = φ(Σ(x_a² + y_a²))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialPotential {
    /// `φ(s) = ln(1 + s)`.
    FubiniStudy,
    /// `φ(s) = −ln(1 − s)` on the unit ball.
    Hyperbolic,
}

impl RadialPotential {
    /// `[φ', φ'', φ''', φ'''']` at `s`.
    fn derivatives(self, s: f64) -> [f64; 4] {
        match self {
            RadialPotential::FubiniStudy => {
                let t = 1.0 / (1.0 + s);
                [t, -t * t, 2.0 * t.powi(3), -6.0 * t.powi(4)]
            }
            RadialPotential::Hyperbolic => {
                let t = 1.0 / (1.0 - s);
                [t, t * t, 2.0 * t.powi(3), 6.0 * t.powi(4)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricModel {
    /// `g = identity`.
    Flat,
    /// J-invariant part of the real Hessian of a radial potential.
    Potential(RadialPotential),
    /// `g = e^{2x₁}·identity`.
    Conformal,
}

/// Metric, its inverse and its first and second coordinate partials at a point.
///
/// `dg[m,i,j] = ∂_m g_ij` and `ddg[m,l,i,j] = ∂_m ∂_l g_ij`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: Tensor,
    pub g_inv: Tensor,
    pub dg: Tensor,
    pub ddg: Tensor,
}

/// A chart with metric `g`, structure `A` and the Kähler expectation flag.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    pub name: String,
    pub chart: Chart,
    pub model: MetricModel,
    structure: Tensor,
    pub kahler_expected: bool,
    /// Radius of the ball around the origin that sample points are drawn from.
    pub sample_radius: f64,
}

/// The standard complex structure on `R^{2k}` as a (1,1) tensor.
pub fn standard_structure(k: usize) -> Tensor {
    let n = 2 * k;
    Tensor::from_fn(n, Signature::mixed(1, 1), |i| {
        let (row, col) = (i[0], i[1]);
        if row / 2 != col / 2 {
            0.0
        } else if row % 2 == 1 && col % 2 == 0 {
            1.0
        } else if row % 2 == 0 && col % 2 == 1 {
            -1.0
        } else {
            0.0
        }
    })
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || 2 * k > MAX_DIM {
        return Err(Error::InvalidConfig(format!(
            "k = {k} gives dimension outside 2..={MAX_DIM}"
        )));
    }
    Ok(())
}

fn chart(n: usize, domain: Domain, label: &str) -> Chart {
    Chart {
        n,
        domain,
        label: label.to_string(),
    }
}

/// Euclidean `R^{2k}` with the standard structure.
pub fn flat_complex(k: usize) -> Result<ManifoldSpec> {
    check_k(k)?;
    Ok(ManifoldSpec {
        name: "flat".into(),
        chart: chart(2 * k, Domain::Everywhere, "R^2k"),
        model: MetricModel::Flat,
        structure: standard_structure(k),
        kahler_expected: true,
        sample_radius: 0.5,
    })
}

/// Fubini-Study metric in the affine chart, potential `ln(1 + |z|²)`.
pub fn fubini_study(k: usize) -> Result<ManifoldSpec> {
    check_k(k)?;
    Ok(ManifoldSpec {
        name: "fs".into(),
        chart: chart(2 * k, Domain::Everywhere, "affine chart of CP^k"),
        model: MetricModel::Potential(RadialPotential::FubiniStudy),
        structure: standard_structure(k),
        kahler_expected: true,
        sample_radius: 0.5,
    })
}

/// Bergman-type metric on the unit ball, potential `−ln(1 − |z|²)`.
pub fn complex_hyperbolic(k: usize) -> Result<ManifoldSpec> {
    check_k(k)?;
    Ok(ManifoldSpec {
        name: "hyperbolic".into(),
        chart: chart(2 * k, Domain::Ball { radius_sq: 1.0 - 1e-6 }, "unit ball in C^k"),
        model: MetricModel::Potential(RadialPotential::Hyperbolic),
        structure: standard_structure(k),
        kahler_expected: true,
        sample_radius: 0.4,
    })
}

/// `R⁴` with `g = e^{2x₁}·identity`: Hermitian but not Kähler.
pub fn conformal_nonkahler() -> ManifoldSpec {
    conformal_nonkahler_k(2).expect("k = 2 is valid")
}

/// The conformal non-Kähler metric on `R^{2k}`.
pub fn conformal_nonkahler_k(k: usize) -> Result<ManifoldSpec> {
    check_k(k)?;
    Ok(ManifoldSpec {
        name: "conformal-nonkahler".into(),
        chart: chart(2 * k, Domain::Everywhere, "R^2k"),
        model: MetricModel::Conformal,
        structure: standard_structure(k),
        kahler_expected: false,
        sample_radius: 0.5,
    })
}

impl ManifoldSpec {
    /// Catalog lookup by CLI name.
    pub fn by_name(name: &str, k: usize) -> Result<ManifoldSpec> {
        match name {
            "flat" | "flat-complex" => flat_complex(k),
            "fs" | "fubini-study" => fubini_study(k),
            "hyperbolic" | "complex-hyperbolic" => complex_hyperbolic(k),
            "conformal-nonkahler" | "conformal" => conformal_nonkahler_k(k),
            _ => Err(Error::UnknownManifold {
                name: name.to_string(),
                valid: MANIFOLD_NAMES.join(", "),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.chart.n
    }

    pub fn k(&self) -> usize {
        self.chart.n / 2
    }

    /// Replaces the structure tensor (used to build corrupted fixtures).
    pub fn with_structure(mut self, a: Tensor) -> Result<Self> {
        if a.dim() != self.dim() || a.signature() != &Signature::mixed(1, 1) {
            return Err(Error::SignatureMismatch(format!(
                "structure must be (1,1) of dimension {}",
                self.dim()
            )));
        }
        self.structure = a;
        Ok(self)
    }

    /// The structure `A`; constant in the chart coordinates.
    pub fn structure(&self) -> &Tensor {
        &self.structure
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: p.dim(),
            });
        }
        if !self.chart.contains(p) {
            return Err(Error::OutsideDomain(p.0.clone()));
        }
        Ok(())
    }

    /// Closed-form radial derivative tensors of the potential up to order 4.
    fn potential_jets(&self, pot: RadialPotential, p: &Point) -> [Tensor; 3] {
        let n = self.dim();
        let u = &p.0;
        let [d1, d2, d3, d4] = pot.derivatives(p.norm_sq());
        let delta = |i: usize, j: usize| (i == j) as u8 as f64;
        let k2 = Tensor::from_fn(n, Signature::mixed(0, 2), |x| {
            let (i, j) = (x[0], x[1]);
            4.0 * d2 * u[i] * u[j] + 2.0 * d1 * delta(i, j)
        });
        let k3 = Tensor::from_fn(n, Signature::mixed(0, 3), |x| {
            let (i, j, k) = (x[0], x[1], x[2]);
            8.0 * d3 * u[i] * u[j] * u[k] + 4.0 * d2 * (delta(i, j) * u[k] + delta(i, k) * u[j] + delta(j, k) * u[i])
        });
        let k4 = Tensor::from_fn(n, Signature::mixed(0, 4), |x| {
            let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
            16.0 * d4 * u[i] * u[j] * u[k] * u[l]
                + 8.0
                    * d3
                    * (delta(i, j) * u[k] * u[l]
                        + delta(i, k) * u[j] * u[l]
                        + delta(i, l) * u[j] * u[k]
                        + delta(j, k) * u[i] * u[l]
                        + delta(j, l) * u[i] * u[k]
                        + delta(k, l) * u[i] * u[j])
                + 4.0 * d2 * (delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k))
        });
        [k2, k3, k4]
    }

    /// A-average of the last two slots: `½(T(..,X,Y) + T(..,AX,AY))`.
    fn hermitize_last_two(&self, t: &Tensor) -> Tensor {
        let r = t.rank();
        let a = &self.structure;
        let ta = apply_endo(&apply_endo(t, a, r - 2).expect("slot in range"), a, r - 1).expect("slot in range");
        0.5 * (t + &ta)
    }

    /// Metric components at `p`.
    pub fn metric(&self, p: &Point) -> Result<Tensor> {
        self.check_point(p)?;
        let n = self.dim();
        let g = match self.model {
            MetricModel::Flat => Tensor::from_fn(n, Signature::mixed(0, 2), |i| (i[0] == i[1]) as u8 as f64),
            MetricModel::Conformal => {
                let c = (2.0 * p.0[0]).exp();
                Tensor::from_fn(n, Signature::mixed(0, 2), |i| if i[0] == i[1] { c } else { 0.0 })
            }
            MetricModel::Potential(pot) => {
                let u = &p.0;
                let [d1, d2, _, _] = pot.derivatives(p.norm_sq());
                let h = Tensor::from_fn(n, Signature::mixed(0, 2), |x| {
                    4.0 * d2 * u[x[0]] * u[x[1]] + if x[0] == x[1] { 2.0 * d1 } else { 0.0 }
                });
                self.hermitize_last_two(&h)
            }
        };
        if g.data().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(g)
    }

    /// Metric with first and second partials, by closed form or finite
    /// differences according to `cfg`.
    pub fn metric_jet(&self, p: &Point, cfg: &DiffConfig) -> Result<MetricJet> {
        self.check_point(p)?;
        let g = self.metric(p)?;
        let g_inv = invert_metric(&g, MAX_METRIC_CONDITION)?;
        let (dg, ddg) = match cfg.scheme {
            DiffScheme::Analytic => self.analytic_metric_partials(p)?,
            DiffScheme::Fd2 | DiffScheme::Fd4 => {
                let field = MetricField(self);
                (derivative(&field, p, 1, cfg)?, derivative(&field, p, 2, cfg)?)
            }
        };
        Ok(MetricJet { g, g_inv, dg, ddg })
    }

    fn analytic_metric_partials(&self, p: &Point) -> Result<(Tensor, Tensor)> {
        let n = self.dim();
        Ok(match self.model {
            MetricModel::Flat => (
                Tensor::zeros(n, Signature::mixed(0, 3)),
                Tensor::zeros(n, Signature::mixed(0, 4)),
            ),
            MetricModel::Conformal => {
                let c = (2.0 * p.0[0]).exp();
                let dg = Tensor::from_fn(n, Signature::mixed(0, 3), |x| {
                    if x[0] == 0 && x[1] == x[2] {
                        2.0 * c
                    } else {
                        0.0
                    }
                });
                let ddg = Tensor::from_fn(n, Signature::mixed(0, 4), |x| {
                    if x[0] == 0 && x[1] == 0 && x[2] == x[3] {
                        4.0 * c
                    } else {
                        0.0
                    }
                });
                (dg, ddg)
            }
            MetricModel::Potential(pot) => {
                let [_, k3, k4] = self.potential_jets(pot, p);
                // K-jets are fully symmetric, so the derivative slots may be read first.
                (self.hermitize_last_two(&k3), self.hermitize_last_two(&k4))
            }
        })
    }

    /// `F(X,Y) = g(AX,Y)`.
    pub fn kahler_form(&self, p: &Point) -> Result<Tensor> {
        apply_endo(&self.metric(p)?, &self.structure, 0)
    }

    /// `G = g + F`.
    pub fn generalized_metric(&self, p: &Point) -> Result<Tensor> {
        let g = self.metric(p)?;
        let f = apply_endo(&g, &self.structure, 0)?;
        Ok(&g + &f)
    }

    /// Seeded points drawn uniformly from the ball of radius `sample_radius`.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.sample_radius;
        let n = self.dim();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-r..r)).collect();
            let p = Point(c);
            if p.norm_sq() < r * r && self.chart.contains(&p) {
                out.push(p);
            }
        }
        out
    }
}

/// The metric `g` as a differentiable field.
pub struct MetricField<'a>(pub &'a ManifoldSpec);

impl TensorField for MetricField<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn signature(&self) -> Signature {
        Signature::mixed(0, 2)
    }
    fn value(&self, p: &Point) -> Result<Tensor> {
        self.0.metric(p)
    }
    fn contains(&self, p: &Point) -> bool {
        self.0.chart.contains(p)
    }
    fn analytic_derivative(&self, p: &Point, order: usize) -> Option<Result<Tensor>> {
        let r = self.0.analytic_metric_partials(p);
        match order {
            1 => Some(r.map(|(d, _)| d)),
            2 => Some(r.map(|(_, dd)| dd)),
            _ => None,
        }
    }
}

/// Which metric-derived (0,2) field to expose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `F(X,Y) = g(AX,Y)`.
    Kahler,
    /// `G = g + F`.
    Generalized,
}

/// `F` or `G` as a differentiable field; partials follow from those of `g`.
pub struct FormField<'a> {
    pub manifold: &'a ManifoldSpec,
    pub kind: FormKind,
}

impl FormField<'_> {
    fn apply_to_metric_like(&self, t: &Tensor, first_slot: usize) -> Result<Tensor> {
        let f = apply_endo(t, self.manifold.structure(), first_slot)?;
        Ok(match self.kind {
            FormKind::Kahler => f,
            FormKind::Generalized => t + &f,
        })
    }
}

impl TensorField for FormField<'_> {
    fn dim(&self) -> usize {
        self.manifold.dim()
    }
    fn signature(&self) -> Signature {
        Signature::mixed(0, 2)
    }
    fn value(&self, p: &Point) -> Result<Tensor> {
        self.apply_to_metric_like(&self.manifold.metric(p)?, 0)
    }
    fn contains(&self, p: &Point) -> bool {
        self.manifold.chart.contains(p)
    }
    fn analytic_derivative(&self, p: &Point, order: usize) -> Option<Result<Tensor>> {
        let partials = MetricField(self.manifold).analytic_derivative(p, order)?;
        Some(partials.and_then(|d| self.apply_to_metric_like(&d, order)))
    }
}

/// The structure `A` as a field; constant in chart coordinates.
pub struct StructureField<'a>(pub &'a ManifoldSpec);

impl TensorField for StructureField<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn signature(&self) -> Signature {
        Signature::mixed(1, 1)
    }
    fn value(&self, _p: &Point) -> Result<Tensor> {
        Ok(self.0.structure().clone())
    }
    fn contains(&self, p: &Point) -> bool {
        self.0.chart.contains(p)
    }
    fn analytic_derivative(&self, _p: &Point, order: usize) -> Option<Result<Tensor>> {
        let sig = Signature::mixed(0, order).concat(&Signature::mixed(1, 1));
        Some(Ok(Tensor::zeros(self.0.dim(), sig)))
    }
}

/// Residuals of the almost-Hermitian axioms and the relations derived from them.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AlmostHermitianReport {
    /// `A² + I`.
    pub a_squared: f64,
    /// `g(AX,AY) − g(X,Y)`.
    pub a_compatible: f64,
    /// `F(AX,Y) + g(X,Y)` and `F(X,AY) − g(X,Y)`.
    pub f_ax_y: f64,
    /// `F(AX,AY) − F(X,Y)`.
    pub f_ax_ay: f64,
    /// `G(AX,Y) + G(X,AY)` and `G(AX,Y) + G(Y,X)`.
    pub g_ax_y: f64,
    /// `G(AX,AY) − G(X,Y)`.
    pub g_ax_ay: f64,
}

impl AlmostHermitianReport {
    pub fn max(&self) -> f64 {
        [
            self.a_squared,
            self.a_compatible,
            self.f_ax_y,
            self.f_ax_ay,
            self.g_ax_y,
            self.g_ax_ay,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Maximum residuals of the almost-Hermitian relations over `points`.
pub fn check_almost_hermitian(m: &ManifoldSpec, points: &[Point]) -> Result<AlmostHermitianReport> {
    let a = m.structure();
    let n = m.dim();
    let id = Tensor::identity(n);
    let a2 = crate::tensor::einsum("ia,aj->ij", &[a, a])?;
    let mut rep = AlmostHermitianReport {
        a_squared: (&a2 + &id).norm_max(),
        ..Default::default()
    };
    let both = |t: &Tensor| -> Result<Tensor> { apply_endo(&apply_endo(t, a, 0)?, a, 1) };
    for p in points {
        let g = m.metric(p)?;
        let f = apply_endo(&g, a, 0)?;
        let big_g = &g + &f;
        rep.a_compatible = rep.a_compatible.max((both(&g)? - &g).norm_max());
        let f_ax = apply_endo(&f, a, 0)?;
        let f_xa = apply_endo(&f, a, 1)?;
        rep.f_ax_y = rep.f_ax_y.max((&f_ax + &g).norm_max()).max((&f_xa - &g).norm_max());
        rep.f_ax_ay = rep.f_ax_ay.max((both(&f)? - &f).norm_max());
        let gg_ax = apply_endo(&big_g, a, 0)?;
        let gg_xa = apply_endo(&big_g, a, 1)?;
        rep.g_ax_y = rep
            .g_ax_y
            .max((&gg_ax + &gg_xa).norm_max())
            .max((&gg_ax + &big_g.transpose()).norm_max());
        rep.g_ax_ay = rep.g_ax_ay.max((both(&big_g)? - &big_g).norm_max());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd4() -> DiffConfig {
        DiffConfig::new(DiffScheme::Fd4, 1e-3, false).unwrap()
    }

    #[test]
    fn flat_values() {
        let m = flat_complex(2).unwrap();
        let p = Point::new(vec![0.3, -0.2, 1.0, 4.0]);
        let g = m.metric(&p).unwrap();
        let f = m.kahler_form(&p).unwrap();
        assert_eq!(g.get(&[0, 0]), 1.0);
        assert_eq!(f.get(&[0, 1]), 1.0);
        // A²∂x₂ = −∂x₂
        let a = m.structure();
        let a2 = crate::tensor::einsum("ia,aj->ij", &[a, a]).unwrap();
        assert_eq!(a2.get(&[2, 2]), -1.0);
        assert_eq!(a.get(&[1, 0]), 1.0);
        assert_eq!(a.get(&[0, 1]), -1.0);
    }

    #[test]
    fn fs_metric_at_origin_is_twice_identity() {
        // K = ln(1+s) ≈ s near 0, so the real Hessian is 2·I.
        let m = fubini_study(2).unwrap();
        let g = m.metric(&Point::origin(4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.get(&[i, j]), if i == j { 2.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn hyperbolic_domain_boundary() {
        let m = complex_hyperbolic(2).unwrap();
        let r = (1.0f64 - 1e-6).sqrt();
        assert!(m.metric(&Point::new(vec![r, 0.0, 0.0, 0.0])).is_err());
        assert!(m.metric(&Point::new(vec![0.9, 0.0, 0.0, 0.0])).is_ok());
        assert!(!m.chart.contains(&Point::new(vec![0.8, 0.0, 0.6, 0.1])));
    }

    #[test]
    fn conformal_at_origin_is_identity() {
        let m = conformal_nonkahler();
        let g = m.metric(&Point::origin(4)).unwrap();
        assert_eq!(g, flat_complex(2).unwrap().metric(&Point::origin(4)).unwrap());
        let rep = check_almost_hermitian(&m, &m.sample_points(5, 1)).unwrap();
        assert!(rep.max() < 1e-12);
    }

    #[test]
    fn almost_hermitian_catalog() {
        for m in [
            flat_complex(2).unwrap(),
            fubini_study(2).unwrap(),
            complex_hyperbolic(3).unwrap(),
        ] {
            let pts = m.sample_points(20, 11);
            let rep = check_almost_hermitian(&m, &pts).unwrap();
            assert!(rep.max() < 1e-12, "{}: {rep:?}", m.name);
        }
        let flat = check_almost_hermitian(&flat_complex(2).unwrap(), &[Point::origin(4)]).unwrap();
        assert_eq!(flat.max(), 0.0);
    }

    #[test]
    fn corrupted_structure_detected() {
        let m = flat_complex(2).unwrap();
        let a = m.structure().scale(1.01);
        let m = m.with_structure(a).unwrap();
        let rep = check_almost_hermitian(&m, &[Point::origin(4)]).unwrap();
        assert!((rep.a_squared - (1.01f64 * 1.01 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn fd4_matches_closed_form_partials() {
        for m in [
            fubini_study(2).unwrap(),
            complex_hyperbolic(2).unwrap(),
            conformal_nonkahler(),
        ] {
            for p in m.sample_points(5, 9) {
                let exact = m.metric_jet(&p, &DiffConfig::default()).unwrap();
                let approx = m.metric_jet(&p, &fd4()).unwrap();
                let e1 = (&exact.dg - &approx.dg).norm_max() / exact.dg.norm_max().max(1.0);
                let e2 = (&exact.ddg - &approx.ddg).norm_max() / exact.ddg.norm_max().max(1.0);
                assert!(e1 < 1e-6 && e2 < 1e-6, "{}: {e1:e} {e2:e}", m.name);
            }
        }
    }

    #[test]
    fn sampling_is_seeded_and_inside() {
        let m = complex_hyperbolic(2).unwrap();
        let a = m.sample_points(10, 5);
        assert_eq!(a, m.sample_points(10, 5));
        assert_ne!(a, m.sample_points(10, 6));
        assert!(a.iter().all(|p| p.norm_sq() < 0.16));
    }

    #[test]
    fn dimension_bound() {
        assert!(fubini_study(9999).is_err());
        assert!(fubini_study(8).is_ok());
        assert!(ManifoldSpec::by_name("torus", 2).is_err());
    }
}
