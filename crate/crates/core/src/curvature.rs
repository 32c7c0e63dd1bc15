//! Riemannian curvature, the six curvature tensors of the quarter-symmetric
//! connection, the `D` tensors, Ricci-type traces and the Kähler identities.
//!
//! All (1,3) tensors use the layout `(out; X, Y, Z)`, so `R[l][i][j][k]` is the
//! `∂_l` component of `R(∂_i, ∂_j)∂_k` with
//! `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.

use crate::connections::{covariant_derivative_of, levi_civita_jet_from, quarter_symmetric_jet_from, ConnectionJet};
use crate::error::{Error, Result};
use crate::geometry::{derivative, DiffConfig, GeneratorField, ManifoldSpec, Point, TensorField};
use crate::residual::Residual;
use crate::tensor::{apply_endo, contract, einsum, Signature, Tensor};

/// Which algebraic form of `R⁴`, `R⁵`, `R⁰` to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaForm {
    /// `A² = −I` already substituted.
    #[default]
    Kahler,
    /// Forms valid on any generalized Riemannian manifold, written with `A²`.
    General,
}

/// `R^l_{ijk} = ∂_iL^l_{jk} − ∂_jL^l_{ik} + L^l_{im}L^m_{jk} − L^l_{jm}L^m_{ik}`
/// for coefficients `L` and partials `dL` with slots `(m; i; j, k)`.
pub fn riemann_from_coefficients(gamma: &Tensor, d_gamma: &Tensor) -> Result<Tensor> {
    let a = einsum("iljk->lijk", &[d_gamma])?;
    let b = einsum("jlik->lijk", &[d_gamma])?;
    let c = einsum("lim,mjk->lijk", &[gamma, gamma])?;
    let d = einsum("ljm,mik->lijk", &[gamma, gamma])?;
    Ok(a - &b + &c - &d)
}

pub fn riemann_of_jet(jet: &ConnectionJet) -> Result<Tensor> {
    riemann_from_coefficients(&jet.coefficients.gamma, &jet.d_gamma)
}

pub fn riemann_g(m: &ManifoldSpec, p: &Point, cfg: &DiffConfig) -> Result<Tensor> {
    let jet = m.metric_jet(p, cfg)?;
    riemann_of_jet(&levi_civita_jet_from(&jet))
}

/// Curvature of the quarter-symmetric coefficients computed directly from
/// their partials, independent of the decomposition into `D` tensors.
pub fn commutator_r1(m: &ManifoldSpec, p: &Point, pi: &GeneratorField, cfg: &DiffConfig) -> Result<Tensor> {
    let lc = levi_civita_jet_from(&m.metric_jet(p, cfg)?);
    let d_pi = derivative(pi, p, 1, cfg)?;
    let qs = quarter_symmetric_jet_from(&lc, &pi.value(p)?, &d_pi, m.structure());
    riemann_of_jet(&qs)
}

/// `(∇^g_X π)(Y)` with slots `(X, Y)`.
pub fn nabla_g_pi(m: &ManifoldSpec, p: &Point, pi: &GeneratorField, cfg: &DiffConfig) -> Result<Tensor> {
    let jet = m.metric_jet(p, cfg)?;
    let lc = levi_civita_jet_from(&jet);
    covariant_derivative_of(&lc.coefficients, &pi.value(p)?, &derivative(pi, p, 1, cfg)?)
}

fn outer(a: &Tensor, b: &Tensor) -> Tensor {
    einsum("x,y->xy", &[a, b]).expect("covectors")
}

/// `D⁰…D³` from `π` and `∇^gπ`.
pub fn d_tensors_from(pi: &Tensor, nabla_pi: &Tensor, a: &Tensor) -> [Tensor; 4] {
    let pi_a = apply_endo(pi, a, 0).expect("covector");
    // π(X)π(AY) and π(AX)π(Y) as (X, Y) tensors
    let pi_pia = outer(pi, &pi_a);
    let pia_pi = outer(&pi_a, pi);
    let d0 = nabla_pi + &(&pi_pia + &pia_pi).scale(0.5);
    let d1 = nabla_pi - &nabla_pi.transpose();
    let d2 = nabla_pi + &pia_pi;
    let d3 = nabla_pi + &pi_pia;
    [d0, d1, d2, d3]
}

/// `D⁴(Y,Z) = (∇^g_Y π)(AZ) − 2π(Y)π(Z)`.
pub fn d4_from(pi: &Tensor, nabla_pi: &Tensor, a: &Tensor) -> Tensor {
    apply_endo(nabla_pi, a, 1).expect("(0,2)") - &outer(pi, pi).scale(2.0)
}

pub fn d_tensor(theta: usize, m: &ManifoldSpec, p: &Point, pi: &GeneratorField, cfg: &DiffConfig) -> Result<Tensor> {
    if theta > 3 {
        return Err(Error::InvalidConfig(format!(
            "D tensors are indexed 0..=3, got {theta}"
        )));
    }
    let nabla = nabla_g_pi(m, p, pi, cfg)?;
    let [d0, d1, d2, d3] = d_tensors_from(&pi.value(p)?, &nabla, m.structure());
    Ok([d0, d1, d2, d3].into_iter().nth(theta).expect("checked"))
}

/// `B(X,Y) V Z`.
pub(crate) fn bxy_vz(b: &Tensor, v: &Tensor) -> Tensor {
    einsum("xy,lz->lxyz", &[b, v]).expect("(0,2) and (1,1)")
}

/// `B(X,Z) V Y`.
pub(crate) fn bxz_vy(b: &Tensor, v: &Tensor) -> Tensor {
    einsum("xz,ly->lxyz", &[b, v]).expect("(0,2) and (1,1)")
}

/// `B(Y,Z) V X`.
pub(crate) fn byz_vx(b: &Tensor, v: &Tensor) -> Tensor {
    einsum("yz,lx->lxyz", &[b, v]).expect("(0,2) and (1,1)")
}

/// `R^θ` assembled from `R^g`, the `D` tensors, `π` and `A`.
pub fn r_theta_from(theta: usize, form: ThetaForm, r_g: &Tensor, d: &[Tensor; 4], pi: &Tensor, a: &Tensor) -> Tensor {
    let [d0, d1, d2, d3] = d;
    let n = a.dim();
    let id = Tensor::identity(n);
    let pp = outer(pi, pi);
    // π(Z)(π(Y)VX − π(X)VY) and π(Y)(π(X)VZ − π(Z)VX)
    let z_yx = |v: &Tensor| byz_vx(&pp.transpose(), v) - &bxz_vy(&pp, v);
    let y_xz = |v: &Tensor| bxy_vz(&pp, v) - &byz_vx(&pp, v);
    let a2 = einsum("ia,aj->ij", &[a, a]).expect("(1,1)");
    match (theta, form) {
        (1, _) => r_g - &bxy_vz(d1, a),
        (2, _) => r_g - &bxz_vy(d2, a) + &byz_vx(d2, a),
        (3, _) => r_g - &bxy_vz(d2, a) + &byz_vx(d3, a),
        (4, ThetaForm::Kahler) => r_g - &bxy_vz(d3, a) + &byz_vx(d3, a) + &z_yx(&id),
        (4, ThetaForm::General) => r_g - &bxy_vz(d3, a) + &byz_vx(d3, a) - &z_yx(&a2),
        (5, ThetaForm::Kahler) => {
            r_g - &bxy_vz(d1, a).scale(0.5) - &bxz_vy(d3, a).scale(0.5) + &byz_vx(d2, a).scale(0.5)
                - &y_xz(&id).scale(0.5)
        }
        (5, ThetaForm::General) => {
            let skew = d2 - &d3.transpose();
            r_g - &bxy_vz(&skew, a).scale(0.5) - &bxz_vy(d3, a).scale(0.5)
                + &byz_vx(d2, a).scale(0.5)
                + &y_xz(&a2).scale(0.5)
        }
        (0, ThetaForm::Kahler) => {
            let s = d2 + d3;
            r_g - &bxy_vz(d1, a).scale(0.5) - &bxz_vy(&s, a).scale(0.25)
                + &byz_vx(&s, a).scale(0.25)
                + &z_yx(&id).scale(0.25)
        }
        (0, ThetaForm::General) => {
            let skew = d0 - &d0.transpose();
            r_g - &bxy_vz(&skew, a).scale(0.5) - &bxz_vy(d0, a).scale(0.5) + &byz_vx(d0, a).scale(0.5)
                - &z_yx(&a2).scale(0.25)
        }
        _ => panic!("curvature tensors are indexed 0..=5, got {theta}"),
    }
}

pub fn r_theta(theta: usize, m: &ManifoldSpec, p: &Point, pi: &GeneratorField, cfg: &DiffConfig) -> Result<Tensor> {
    if theta > 5 {
        return Err(Error::InvalidConfig(format!(
            "curvature tensors are indexed 0..=5, got {theta}"
        )));
    }
    Ok(CurvatureBundle::new(m, p, pi, cfg)?.r_theta[theta].clone())
}

fn check_curvature_layout(t: &Tensor) -> Result<()> {
    if t.signature() != &Signature::mixed(1, 3) {
        return Err(Error::SignatureMismatch(format!(
            "expected a (1,3) curvature tensor, got {}",
            t.signature()
        )));
    }
    Ok(())
}

/// `Ric(Y,Z) = Trace{X → R(X,Y)Z}`.
pub fn ricci(t: &Tensor) -> Result<Tensor> {
    check_curvature_layout(t)?;
    contract(t, 0, 1)
}

/// `'R(X,Y) = Trace{Z → R(X,Y)Z}`.
pub fn prime_r(t: &Tensor) -> Result<Tensor> {
    check_curvature_layout(t)?;
    contract(t, 0, 3)
}

/// `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.
pub fn lower_curvature(t: &Tensor, g: &Tensor) -> Result<Tensor> {
    check_curvature_layout(t)?;
    einsum("lxyz,lw->xyzw", &[t, g])
}

/// Everything curvature-related at one point for one generator.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub point: Point,
    pub form: ThetaForm,
    pub g: Tensor,
    pub a: Tensor,
    pub pi: Tensor,
    pub nabla_pi: Tensor,
    pub r_g: Tensor,
    pub r_theta: [Tensor; 6],
    pub d_theta: [Tensor; 4],
    pub d4: Tensor,
    pub ric_g: Tensor,
    pub ric_theta: [Tensor; 6],
    pub prime_r3: Tensor,
    pub prime_r4: Tensor,
}

impl CurvatureBundle {
    pub fn new(m: &ManifoldSpec, p: &Point, pi: &GeneratorField, cfg: &DiffConfig) -> Result<Self> {
        Self::with_form(m, p, pi, cfg, ThetaForm::Kahler)
    }

    pub fn with_form(
        m: &ManifoldSpec,
        p: &Point,
        pi: &GeneratorField,
        cfg: &DiffConfig,
        form: ThetaForm,
    ) -> Result<Self> {
        if pi.dim() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                actual: pi.dim(),
            });
        }
        let jet = m.metric_jet(p, cfg)?;
        let lc = levi_civita_jet_from(&jet);
        let r_g = riemann_of_jet(&lc)?;
        let piv = pi.value(p)?;
        let nabla_pi = covariant_derivative_of(&lc.coefficients, &piv, &derivative(pi, p, 1, cfg)?)?;
        Self::assemble(p.clone(), jet.g, m.structure().clone(), r_g, piv, nabla_pi, form)
    }

    /// Pure assembly from pointwise data; `nabla_pi` need not come from an
    /// actual field, which lets tests vary `π` and `∇π` independently.
    pub fn assemble(
        point: Point,
        g: Tensor,
        a: Tensor,
        r_g: Tensor,
        pi: Tensor,
        nabla_pi: Tensor,
        form: ThetaForm,
    ) -> Result<Self> {
        check_curvature_layout(&r_g)?;
        let d_theta = d_tensors_from(&pi, &nabla_pi, &a);
        let d4 = d4_from(&pi, &nabla_pi, &a);
        let r_theta: [Tensor; 6] = std::array::from_fn(|t| r_theta_from(t, form, &r_g, &d_theta, &pi, &a));
        let ric_theta: [Tensor; 6] = std::array::from_fn(|t| ricci(&r_theta[t]).expect("(1,3)"));
        Ok(Self {
            ric_g: ricci(&r_g)?,
            prime_r3: prime_r(&r_theta[3])?,
            prime_r4: prime_r(&r_theta[4])?,
            point,
            form,
            g,
            a,
            pi,
            nabla_pi,
            r_g,
            r_theta,
            d_theta,
            d4,
            ric_theta,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Lowered `R^θ(X,Y,Z,W)`, or `R^g` for `None`.
    pub fn lowered(&self, theta: Option<usize>) -> Tensor {
        let r = theta.map_or(&self.r_g, |t| &self.r_theta[t]);
        lower_curvature(r, &self.g).expect("(1,3)")
    }
}

/// How a curvature tensor interacts with `A`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StructureRelations {
    /// `R(X,Y)AZ = A R(X,Y)Z`.
    pub commutes: Residual,
    /// `R(X,Y,AZ,AW) = R(AX,AY,Z,W)`.
    pub pair: Residual,
    /// `R(X,AY,AZ,W) = R(AX,Y,Z,AW)`.
    pub mixed: Residual,
    /// `R(AX,AY,AZ,AW) = R(X,Y,Z,W)`.
    pub quadruple: Residual,
    /// `R(X,Y,Z,AW) = −R(X,Y,AZ,W)`.
    pub skew: Residual,
}

impl StructureRelations {
    pub fn all(&self) -> [Residual; 5] {
        [self.commutes, self.pair, self.mixed, self.quadruple, self.skew]
    }

    /// The three lowered relations that hold under hybrid hypotheses.
    pub fn lowered_triple(&self) -> Residual {
        Residual::worst_of([self.pair, self.mixed, self.quadruple])
    }

    pub fn commuting_pair(&self) -> Residual {
        self.commutes.worst(self.skew)
    }
}

/// The defect `R(X,Y)AZ − A R(X,Y)Z`.
pub fn commutation_defect(r: &Tensor, a: &Tensor) -> Tensor {
    apply_endo(r, a, 3).expect("(1,3)") - &apply_endo(r, a, 0).expect("(1,3)")
}

pub fn structure_relations(r: &Tensor, g: &Tensor, a: &Tensor) -> Result<StructureRelations> {
    let e = |t: &Tensor, slots: &[usize]| -> Tensor {
        slots
            .iter()
            .fold(t.clone(), |acc, &s| apply_endo(&acc, a, s).expect("slot in range"))
    };
    let r4 = lower_curvature(r, g)?;
    let ar = apply_endo(r, a, 0)?;
    let ra = apply_endo(r, a, 3)?;
    Ok(StructureRelations {
        commutes: Residual::between(&ra, &ar, &[r]),
        pair: Residual::between(&e(&r4, &[2, 3]), &e(&r4, &[0, 1]), &[&r4]),
        mixed: Residual::between(&e(&r4, &[1, 2]), &e(&r4, &[0, 3]), &[&r4]),
        quadruple: Residual::between(&e(&r4, &[0, 1, 2, 3]), &r4, &[]),
        skew: Residual::between(&e(&r4, &[3]), &-e(&r4, &[2]), &[&r4]),
    })
}

/// The five classical Kähler identities for `R^g`.
pub fn kahler_identities(m: &ManifoldSpec, p: &Point, cfg: &DiffConfig) -> Result<StructureRelations> {
    let r = riemann_g(m, p, cfg)?;
    structure_relations(&r, &m.metric(p)?, m.structure())
}

/// `Ric(X,AY) + Ric(AX,Y)`.
pub fn hybrid_sum(b: &Tensor, a: &Tensor) -> Tensor {
    apply_endo(b, a, 1).expect("(0,2)") + &apply_endo(b, a, 0).expect("(0,2)")
}

/// Residuals of every closed form for the contracted curvature tensors,
/// keyed by stable short names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RicciClosedForms {
    pub entries: Vec<(&'static str, Residual)>,
}

impl RicciClosedForms {
    pub fn worst(&self) -> Residual {
        Residual::worst_of(self.entries.iter().map(|(_, r)| *r))
    }

    pub fn get(&self, name: &str) -> Option<Residual> {
        self.entries.iter().find(|(k, _)| *k == name).map(|(_, r)| *r)
    }
}

pub fn ricci_closed_forms_of(b: &CurvatureBundle) -> RicciClosedForms {
    let a = &b.a;
    let n = b.dim() as f64;
    let ax = |t: &Tensor| apply_endo(t, a, 0).expect("(0,2)");
    let ay = |t: &Tensor| apply_endo(t, a, 1).expect("(0,2)");
    let [_, d1, d2, d3] = &b.d_theta;
    let ric = &b.ric_g;
    let rc = &b.ric_theta;
    let pp = outer(&b.pi, &b.pi);
    let mut entries = Vec::new();
    let mut push = |name, lhs: &Tensor, rhs: Tensor| entries.push((name, Residual::between(lhs, &rhs, &[ric])));

    // Ric¹(Y,Z) = Ric(Y,Z) − D¹(AZ,Y)
    push("ric1", &rc[1], ric - &ax(d1).transpose());
    // D¹(Z,Y) = Ric¹(Y,AZ) − Ric(Y,AZ), both sides indexed (Z, Y)
    push("d1-ric1", &d1.clone(), (ay(&rc[1]) - &ay(ric)).transpose());
    push("ric2", &rc[2], ric - &ax(d2));
    push("ric3", &rc[3], ric - &ax(d2).transpose());
    push("d2-ric3", &d2.clone(), (ay(&rc[3]) - &ay(ric)).transpose());
    push("ric4", &rc[4], ric - &ax(d3).transpose() + &pp.scale(n - 1.0));
    push(
        "ric5",
        &rc[5],
        ric - &ax(d1).transpose().scale(0.5) - &ax(d3).scale(0.5) + &pp.scale((n - 1.0) / 2.0),
    );
    // the unlabeled D in this relation is D¹
    push(
        "ric0",
        &rc[0],
        ric - &ax(d1).transpose().scale(0.5) - &ax(&(d2 + d3)).scale(0.25) + &pp.scale((n - 1.0) / 4.0),
    );
    // 'R(X,Y) = D³(Y,AX)
    push("prime_r3", &b.prime_r3, ay(d3).transpose());
    push("prime_r4", &b.prime_r4, ay(d3).transpose());
    // D³(Y,X) = −'R(AX,Y), indexed (Y, X)
    push("d3-prime_r3", &d3.clone(), -ax(&b.prime_r3).transpose());
    push("d3-prime_r4", &d3.clone(), -ax(&b.prime_r4).transpose());
    let aa = |t: &Tensor| ax(&ay(t));
    push("pipi4", &pp, (&rc[4] - ric - &aa(&b.prime_r4)).scale(1.0 / (n - 1.0)));
    // 'R³(AZ,AY) indexed (Y, Z)
    let pr3_azay = aa(&b.prime_r3).transpose();
    push(
        "pipi5",
        &pp,
        (rc[5].scale(2.0) - &rc[1] - &pr3_azay - ric).scale(1.0 / (n - 1.0)),
    );
    push(
        "pipi0",
        &pp,
        (rc[0].scale(4.0) - &rc[1].scale(2.0) - &rc[3].transpose() - &pr3_azay - ric).scale(1.0 / (n - 1.0)),
    );
    RicciClosedForms { entries }
}

pub fn ricci_closed_forms(
    m: &ManifoldSpec,
    p: &Point,
    pi: &GeneratorField,
    cfg: &DiffConfig,
) -> Result<RicciClosedForms> {
    Ok(ricci_closed_forms_of(&CurvatureBundle::new(m, p, pi, cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::cyclic_sum;
    use crate::geometry::{complex_hyperbolic, conformal_nonkahler, flat_complex, fubini_study, DiffScheme};

    fn at(c: &[f64]) -> Point {
        Point::new(c.to_vec())
    }

    fn analytic() -> DiffConfig {
        DiffConfig::default()
    }

    #[test]
    fn flat_curvature_vanishes() {
        let m = flat_complex(2).unwrap();
        assert_eq!(
            riemann_g(&m, &at(&[0.3, 1.0, -2.0, 0.0]), &analytic())
                .unwrap()
                .norm_max(),
            0.0
        );
    }

    #[test]
    fn fs_classical_symmetries() {
        let m = fubini_study(2).unwrap();
        for p in m.sample_points(8, 11) {
            let r = riemann_g(&m, &p, &analytic()).unwrap();
            let g = m.metric(&p).unwrap();
            let r4 = lower_curvature(&r, &g).unwrap();
            // first Bianchi: cyclic in (X, Y, Z)
            let bianchi = &r + &einsum("lyzx->lxyz", &[&r]).unwrap() + &einsum("lzxy->lxyz", &[&r]).unwrap();
            assert!(bianchi.norm_max() < 1e-7);
            assert!((&r4 + &einsum("yxzw->xyzw", &[&r4]).unwrap()).norm_max() < 1e-7);
            assert!((&r4 + &einsum("xywz->xyzw", &[&r4]).unwrap()).norm_max() < 1e-7);
            assert!((&r4 - &einsum("zwxy->xyzw", &[&r4]).unwrap()).norm_max() < 1e-7);
        }
    }

    #[test]
    fn fs_constant_holomorphic_curvature() {
        // Independent oracle: with g = ½(H + H(A·,A·)) for K = ln(1+|u|²), FS has
        // holomorphic sectional curvature 2 at every point.
        let m = fubini_study(2).unwrap();
        for p in m.sample_points(5, 2) {
            let g = m.metric(&p).unwrap();
            let r4 = lower_curvature(&riemann_g(&m, &p, &analytic()).unwrap(), &g).unwrap();
            let x = [0.3, -0.2, 0.5, 0.1];
            let a = m.structure();
            let ax: Vec<f64> = (0..4).map(|i| (0..4).map(|j| a.get(&[i, j]) * x[j]).sum()).collect();
            let mut num = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            num += r4.get(&[i, j, k, l]) * x[i] * ax[j] * ax[k] * x[l];
                        }
                    }
                }
            }
            let gxx: f64 = (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| g.get(&[i, j]) * x[i] * x[j])
                .sum();
            assert!((num / (gxx * gxx) - 2.0).abs() < 1e-8, "{}", num / (gxx * gxx));
        }
    }

    #[test]
    fn d_tensor_hand_values() {
        let m = flat_complex(2).unwrap();
        let pi = GeneratorField::linear_j(4);
        let p = at(&[1.0, 0.0, 0.0, 0.0]);
        let d1 = d_tensor(1, &m, &p, &pi, &analytic()).unwrap();
        let d2 = d_tensor(2, &m, &p, &pi, &analytic()).unwrap();
        let d3 = d_tensor(3, &m, &p, &pi, &analytic()).unwrap();
        assert_eq!(d1.get(&[0, 1]), 2.0);
        assert_eq!(d2.get(&[0, 1]), 2.0);
        assert_eq!(d3.get(&[0, 1]), 1.0);
        let elsewhere = d_tensor(1, &m, &at(&[0.2, -3.0, 1.0, 0.5]), &pi, &analytic()).unwrap();
        assert_eq!(elsewhere.get(&[0, 1]), 2.0);
        assert!(d_tensor(4, &m, &p, &pi, &analytic()).is_err());
        for t in 0..4 {
            assert_eq!(
                d_tensor(t, &m, &p, &GeneratorField::zero(4), &analytic())
                    .unwrap()
                    .norm_max(),
                0.0
            );
        }
    }

    #[test]
    fn d_tensor_linear_relations() {
        let a = crate::geometry::standard_structure(2);
        let pi = Tensor::covector(&[0.4, -1.1, 0.3, 0.9]).unwrap();
        let nabla = Tensor::from_fn(4, Signature::mixed(0, 2), |i| (i[0] * 3 + i[1]) as f64 * 0.1 - 0.7);
        let [d0, d1, d2, d3] = d_tensors_from(&pi, &nabla, &a);
        assert!((&d1 - &(&d2 - &d3.transpose())).norm_max() < 1e-14);
        assert!((&d1 - &(&d0 - &d0.transpose())).norm_max() < 1e-14);
        assert!((&d0.scale(2.0) - &(&d2 + &d3)).norm_max() < 1e-14);
    }

    #[test]
    fn r1_hand_value_and_zero_generator() {
        let m = flat_complex(2).unwrap();
        let pi = GeneratorField::linear_j(4);
        let r1 = r_theta(1, &m, &at(&[1.0, 0.0, 0.0, 0.0]), &pi, &analytic()).unwrap();
        for l in 0..4 {
            assert_eq!(r1.get(&[l, 0, 1, 0]), if l == 1 { -2.0 } else { 0.0 });
        }
        let fs = fubini_study(2).unwrap();
        let p = at(&[0.1, 0.2, -0.3, 0.05]);
        let b = CurvatureBundle::new(&fs, &p, &GeneratorField::zero(4), &analytic()).unwrap();
        for t in 0..6 {
            assert!((&b.r_theta[t] - &b.r_g).norm_max() < 1e-10);
        }
    }

    #[test]
    fn general_and_kahler_forms_agree() {
        let m = complex_hyperbolic(2).unwrap();
        let pi = GeneratorField::random_poly(4, 5);
        for p in m.sample_points(5, 9) {
            let k = CurvatureBundle::with_form(&m, &p, &pi, &analytic(), ThetaForm::Kahler).unwrap();
            let g = CurvatureBundle::with_form(&m, &p, &pi, &analytic(), ThetaForm::General).unwrap();
            for t in 0..6 {
                assert!((&k.r_theta[t] - &g.r_theta[t]).norm_max() < 1e-12, "θ = {t}");
            }
        }
    }

    #[test]
    fn r1_matches_commutator_curvature() {
        for m in [
            flat_complex(2).unwrap(),
            fubini_study(2).unwrap(),
            complex_hyperbolic(2).unwrap(),
        ] {
            for pi in [GeneratorField::linear_j(4), GeneratorField::random_poly(4, 3)] {
                for p in m.sample_points(5, 1) {
                    let direct = commutator_r1(&m, &p, &pi, &analytic()).unwrap();
                    let r1 = r_theta(1, &m, &p, &pi, &analytic()).unwrap();
                    let res = Residual::between(&direct, &r1, &[]);
                    assert!(res.relative() < 1e-9, "{} {}", m.name, res.relative());
                }
            }
        }
    }

    #[test]
    fn r1_commutator_differs_off_kahler() {
        let m = conformal_nonkahler();
        let p = at(&[0.1, 0.0, 0.2, -0.1]);
        let pi = GeneratorField::linear_j(4);
        let direct = commutator_r1(&m, &p, &pi, &analytic()).unwrap();
        let r1 = r_theta(1, &m, &p, &pi, &analytic()).unwrap();
        assert!(Residual::between(&direct, &r1, &[]).relative() > 1e-3);
    }

    #[test]
    fn traces() {
        let m = flat_complex(2).unwrap();
        let b = CurvatureBundle::new(
            &m,
            &at(&[0.5, 0.2, 0.1, 0.0]),
            &GeneratorField::linear_j(4),
            &analytic(),
        )
        .unwrap();
        assert_eq!(b.ric_g.norm_max(), 0.0);
        // Ric¹ = 2g on flat space with this generator
        assert!((&b.ric_theta[1] - &b.g.scale(2.0)).norm_max() < 1e-12);
        assert_eq!(b.ric_theta[1].get(&[0, 0]), 2.0);
        assert!(ricci(&b.g).is_err());
        assert!(prime_r(&b.d4).is_err());
    }

    #[test]
    fn ricci_relations_on_fs() {
        let m = fubini_study(2).unwrap();
        for pi in [GeneratorField::random_poly(4, 7), GeneratorField::linear_j(4)] {
            for p in m.sample_points(6, 7) {
                let b = CurvatureBundle::new(&m, &p, &pi, &analytic()).unwrap();
                let cf = ricci_closed_forms_of(&b);
                for (name, r) in &cf.entries {
                    assert!(r.relative() < 1e-9, "{name}: {}", r.relative());
                }
                assert!((&b.ric_theta[2] - &b.ric_theta[3].transpose()).norm_max() < 1e-9);
                assert!((&b.prime_r3 - &b.prime_r4).norm_max() < 1e-9);
                assert!(hybrid_sum(&b.ric_g, m.structure()).norm_max() < 1e-9);
            }
        }
    }

    #[test]
    fn ricci_closed_forms_zero_generator() {
        let m = fubini_study(2).unwrap();
        let cf = ricci_closed_forms(&m, &at(&[0.1, 0.1, 0.0, 0.2]), &GeneratorField::zero(4), &analytic()).unwrap();
        assert!(cf.worst().max_residual < 1e-14);
        assert!(cf.get("pipi5").is_some());
    }

    #[test]
    fn kahler_identity_report() {
        let fs = fubini_study(2).unwrap();
        for p in fs.sample_points(20, 3) {
            for r in kahler_identities(&fs, &p, &analytic()).unwrap().all() {
                assert!(r.relative() < 1e-9);
            }
        }
        let conf = conformal_nonkahler();
        let k = kahler_identities(&conf, &at(&[0.2, 0.1, -0.1, 0.3]), &analytic()).unwrap();
        assert!(k.commutes.max_residual > 1e-3);
    }

    #[test]
    fn fd4_curvature_tracks_analytic() {
        let m = fubini_study(2).unwrap();
        let fd = DiffConfig::new(DiffScheme::Fd4, 1e-3, false).unwrap();
        for p in m.sample_points(3, 4) {
            let a = riemann_g(&m, &p, &analytic()).unwrap();
            let b = riemann_g(&m, &p, &fd).unwrap();
            assert!(Residual::between(&a, &b, &[]).relative() < 1e-6);
        }
    }

    #[test]
    fn cyclic_sum_of_alternating_tensor() {
        let t = Tensor::from_fn(3, Signature::mixed(0, 3), |i| {
            let (a, b, c) = (i[0] as i64, i[1] as i64, i[2] as i64);
            ((a - b) * (b - c) * (c - a)) as f64
        });
        // fully antisymmetric, so the cyclic sum triples it
        assert_eq!(cyclic_sum(&t), t.scale(3.0));
    }
}
