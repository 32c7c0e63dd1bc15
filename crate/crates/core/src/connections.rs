//! Levi-Civita and quarter-symmetric connection coefficients, covariant
//! derivatives and torsion.
//!
//! Coefficients follow `∇_{∂_j} ∂_k = Γ^i_{jk} ∂_i`: the first lower index
//! is the direction. The quarter-symmetric connection is
//! `∇¹_X Y = ∇^g_X Y − π(X)AY`, i.e. `L^i_{jk} = Γ^i_{jk} − π_j A^i_k`.

use crate::error::{Error, Result};
use crate::geometry::{
    derivative, DiffConfig, FormField, FormKind, GeneratorField, ManifoldSpec, MetricJet, Point, StructureField,
    TensorField,
};
use crate::residual::Residual;
use crate::tensor::{apply_endo, einsum, Signature, Tensor, Variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    QuarterSymmetric,
}

/// Pointwise connection coefficients `Γ^i_{jk}`, stored with slots `(i; j, k)`.
#[derive(Debug, Clone)]
pub struct ConnectionCoefficients {
    pub kind: ConnectionKind,
    pub gamma: Tensor,
}

impl ConnectionCoefficients {
    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `max |Γ^i_{jk} − Γ^i_{kj}|`.
    pub fn asymmetry(&self) -> f64 {
        let swapped = einsum("ikj->ijk", &[&self.gamma]).expect("rank-3 coefficients");
        (&self.gamma - &swapped).norm_max()
    }
}

/// Coefficients together with their first partials `∂_m Γ^i_{jk}` (slots `(m; i; j, k)`).
#[derive(Debug, Clone)]
pub struct ConnectionJet {
    pub coefficients: ConnectionCoefficients,
    pub d_gamma: Tensor,
}

/// `Γ^i_{jk} = ½ g^{il}(∂_j g_{lk} + ∂_k g_{jl} − ∂_l g_{jk})`.
pub fn christoffel(jet: &MetricJet) -> Tensor {
    let t = lowered_christoffel_sum(&jet.dg);
    einsum("il,ljk->ijk", &[&jet.g_inv, &t])
        .expect("shapes fixed")
        .scale(0.5)
}

fn lowered_christoffel_sum(dg: &Tensor) -> Tensor {
    let a = einsum("jlk->ljk", &[dg]).expect("rank 3");
    let b = einsum("kjl->ljk", &[dg]).expect("rank 3");
    let c = einsum("ljk->ljk", &[dg]).expect("rank 3");
    a + &b - &c
}

/// `∂_m Γ^i_{jk}` from the metric jet.
pub fn christoffel_derivative(jet: &MetricJet) -> Tensor {
    let t = lowered_christoffel_sum(&jet.dg);
    let dt = {
        let a = einsum("mjlk->mljk", &[&jet.ddg]).expect("rank 4");
        let b = einsum("mkjl->mljk", &[&jet.ddg]).expect("rank 4");
        a + &b - &jet.ddg
    };
    // ∂_m g^{il} = −g^{ia} ∂_m g_{ab} g^{bl}
    let d_ginv = -einsum("ia,mab,bl->mil", &[&jet.g_inv, &jet.dg, &jet.g_inv]).expect("shapes fixed");
    let first = einsum("mil,ljk->mijk", &[&d_ginv, &t]).expect("shapes fixed");
    let second = einsum("il,mljk->mijk", &[&jet.g_inv, &dt]).expect("shapes fixed");
    (first + &second).scale(0.5)
}

pub fn levi_civita(m: &ManifoldSpec, p: &Point, cfg: &DiffConfig) -> Result<ConnectionCoefficients> {
    let jet = m.metric_jet(p, cfg)?;
    Ok(ConnectionCoefficients {
        kind: ConnectionKind::LeviCivita,
        gamma: christoffel(&jet),
    })
}

pub fn levi_civita_jet(m: &ManifoldSpec, p: &Point, cfg: &DiffConfig) -> Result<ConnectionJet> {
    let jet = m.metric_jet(p, cfg)?;
    Ok(levi_civita_jet_from(&jet))
}

pub fn levi_civita_jet_from(jet: &MetricJet) -> ConnectionJet {
    ConnectionJet {
        coefficients: ConnectionCoefficients {
            kind: ConnectionKind::LeviCivita,
            gamma: christoffel(jet),
        },
        d_gamma: christoffel_derivative(jet),
    }
}

/// `π_j A^i_k` with slots `(i; j, k)`.
fn pi_a_term(pi: &Tensor, a: &Tensor) -> Tensor {
    einsum("j,ik->ijk", &[pi, a]).expect("shapes fixed")
}

/// Quarter-symmetric coefficients from Levi-Civita ones.
pub fn quarter_symmetric_from(lc: &ConnectionCoefficients, pi: &Tensor, a: &Tensor) -> ConnectionCoefficients {
    ConnectionCoefficients {
        kind: ConnectionKind::QuarterSymmetric,
        gamma: &lc.gamma - &pi_a_term(pi, a),
    }
}

pub fn quarter_symmetric(
    m: &ManifoldSpec,
    p: &Point,
    pi: &GeneratorField,
    cfg: &DiffConfig,
) -> Result<ConnectionCoefficients> {
    let lc = levi_civita(m, p, cfg)?;
    Ok(quarter_symmetric_from(&lc, &pi.value(p)?, m.structure()))
}

/// Quarter-symmetric coefficients and partials; `A` is constant in the chart,
/// so `∂_m L^i_{jk} = ∂_m Γ^i_{jk} − ∂_m π_j A^i_k`.
pub fn quarter_symmetric_jet_from(lc: &ConnectionJet, pi: &Tensor, d_pi: &Tensor, a: &Tensor) -> ConnectionJet {
    let d_term = einsum("mj,ik->mijk", &[d_pi, a]).expect("shapes fixed");
    ConnectionJet {
        coefficients: quarter_symmetric_from(&lc.coefficients, pi, a),
        d_gamma: &lc.d_gamma - &d_term,
    }
}

pub fn quarter_symmetric_jet(
    m: &ManifoldSpec,
    p: &Point,
    pi: &GeneratorField,
    cfg: &DiffConfig,
) -> Result<ConnectionJet> {
    let lc = levi_civita_jet(m, p, cfg)?;
    let d_pi = derivative(pi, p, 1, cfg)?;
    Ok(quarter_symmetric_jet_from(&lc, &pi.value(p)?, &d_pi, m.structure()))
}

/// Covariant derivative from a field value and its partials (derivative slot
/// first); the direction slot of the result is slot 0.
pub fn covariant_derivative_of(conn: &ConnectionCoefficients, value: &Tensor, partials: &Tensor) -> Result<Tensor> {
    let n = value.dim();
    let rank = value.rank();
    let expected = Signature::mixed(0, 1).concat(value.signature());
    if partials.signature() != &expected || partials.dim() != n || conn.dim() != n {
        return Err(Error::SignatureMismatch(format!(
            "partials {} do not match field {}",
            partials.signature(),
            value.signature()
        )));
    }
    let variances: Vec<Variance> = value.signature().slots().to_vec();
    let gamma = &conn.gamma;
    let mut src = vec![0usize; rank];
    Ok(Tensor::from_fn(n, expected, |idx| {
        let m = idx[0];
        let rest = &idx[1..];
        let mut acc = partials.get(idx);
        for (s, v) in variances.iter().enumerate() {
            src.copy_from_slice(rest);
            let own = rest[s];
            for c in 0..n {
                src[s] = c;
                let t = value.get(&src);
                match v {
                    Variance::Up => acc += gamma.get(&[own, m, c]) * t,
                    Variance::Down => acc -= gamma.get(&[c, m, own]) * t,
                }
            }
        }
        acc
    }))
}

pub fn covariant_derivative(
    conn: &ConnectionCoefficients,
    field: &dyn TensorField,
    p: &Point,
    cfg: &DiffConfig,
) -> Result<Tensor> {
    let value = field.value(p)?;
    let partials = derivative(field, p, 1, cfg)?;
    covariant_derivative_of(conn, &value, &partials)
}

/// `T¹(X,Y) = π(Y)AX − π(X)AY`, slots `(out; X, Y)`.
pub fn torsion_from(pi: &Tensor, a: &Tensor) -> Tensor {
    let first = einsum("k,ij->ijk", &[pi, a]).expect("shapes fixed");
    let second = einsum("j,ik->ijk", &[pi, a]).expect("shapes fixed");
    first - &second
}

pub fn torsion(m: &ManifoldSpec, p: &Point, pi: &GeneratorField) -> Result<Tensor> {
    Ok(torsion_from(&pi.value(p)?, m.structure()))
}

/// `T¹(X,Y,Z) = g(T¹(X,Y), Z)`.
pub fn torsion_lowered(m: &ManifoldSpec, p: &Point, pi: &GeneratorField) -> Result<Tensor> {
    let t = torsion(m, p, pi)?;
    einsum("ijk,il->jkl", &[&t, &m.metric(p)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricityDefects {
    pub nabla1_g: Residual,
    pub nabla1_f: Residual,
    /// `∇¹G`.
    pub nabla1_big_g: Residual,
    pub nabla1_a: Residual,
    pub nabla_g_a: Residual,
}

/// Covariant-derivative defects of `g`, `F`, `G`, `A` under `∇¹` and of `A`
/// under `∇^g`. Report-valued: non-Kähler manifolds simply show large defects.
pub fn metricity_defects(
    m: &ManifoldSpec,
    p: &Point,
    pi: &GeneratorField,
    cfg: &DiffConfig,
) -> Result<MetricityDefects> {
    let jet = m.metric_jet(p, cfg)?;
    let lc = ConnectionCoefficients {
        kind: ConnectionKind::LeviCivita,
        gamma: christoffel(&jet),
    };
    let qs = quarter_symmetric_from(&lc, &pi.value(p)?, m.structure());

    let f_field = FormField {
        manifold: m,
        kind: FormKind::Kahler,
    };
    let big_g_field = FormField {
        manifold: m,
        kind: FormKind::Generalized,
    };
    let a_field = StructureField(m);

    let defect = |conn: &ConnectionCoefficients, field: &dyn TensorField, value: &Tensor| -> Result<Residual> {
        let partials = derivative(field, p, 1, cfg)?;
        let nabla = covariant_derivative_of(conn, value, &partials)?;
        Ok(Residual::of_defect(&nabla, &[value, &partials]))
    };
    let f = f_field.value(p)?;
    let big_g = big_g_field.value(p)?;
    let a = m.structure().clone();
    let nabla1_g = {
        let nabla = covariant_derivative_of(&qs, &jet.g, &jet.dg)?;
        Residual::of_defect(&nabla, &[&jet.g, &jet.dg])
    };
    Ok(MetricityDefects {
        nabla1_g,
        nabla1_f: defect(&qs, &f_field, &f)?,
        nabla1_big_g: defect(&qs, &big_g_field, &big_g)?,
        nabla1_a: defect(&qs, &a_field, &a)?,
        nabla_g_a: defect(&lc, &a_field, &a)?,
    })
}

/// The three torsion identities on an almost Hermitian manifold.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TorsionIdentities {
    /// `A T¹(AX,AY) = A T¹(X,Y) − T¹(AX,Y) − T¹(X,AY)`.
    pub endomorphism: Residual,
    /// `T¹(X,Y,Z) = T¹(AX,AY,Z) + T¹(AX,Y,AZ) + T¹(X,AY,AZ)`.
    pub lowered: Residual,
    /// `σ T¹(X,Y,Z) = σ(T¹(AX,Y,AZ) + T¹(X,AY,AZ))`.
    pub cyclic: Residual,
}

/// Cyclic sum over the three slots of a (0,3) tensor.
pub(crate) fn cyclic_sum(t: &Tensor) -> Tensor {
    let b = einsum("yzx->xyz", &[t]).expect("rank 3");
    let c = einsum("zxy->xyz", &[t]).expect("rank 3");
    t + &b + &c
}

pub fn torsion_identities_from(t: &Tensor, g: &Tensor, a: &Tensor) -> Result<TorsionIdentities> {
    let e = |t: &Tensor, slot: usize| apply_endo(t, a, slot);
    let lhs = e(&e(&e(t, 1)?, 2)?, 0)?;
    let rhs = e(t, 0)? - &e(t, 1)? - &e(t, 2)?;
    let endomorphism = Residual::between(&lhs, &rhs, &[t]);

    let tl = einsum("ijk,il->jkl", &[t, g])?;
    let ax_ay_z = e(&e(&tl, 0)?, 1)?;
    let ax_y_az = e(&e(&tl, 0)?, 2)?;
    let x_ay_az = e(&e(&tl, 1)?, 2)?;
    let sum = &ax_ay_z + &ax_y_az + &x_ay_az;
    let lowered = Residual::between(&tl, &sum, &[]);

    let cyc_lhs = cyclic_sum(&tl);
    let cyc_rhs = cyclic_sum(&(&ax_y_az + &x_ay_az));
    let cyclic = Residual::between(&cyc_lhs, &cyc_rhs, &[&tl]);
    Ok(TorsionIdentities {
        endomorphism,
        lowered,
        cyclic,
    })
}

pub fn torsion_identities(m: &ManifoldSpec, p: &Point, pi: &GeneratorField) -> Result<TorsionIdentities> {
    let t = torsion(m, p, pi)?;
    torsion_identities_from(&t, &m.metric(p)?, m.structure())
}
