//! Generalized Cartan structure equations, flat generalized connections,
//! the pointwise group of generalized frame rotations and gf-coordinates.
//!
//! Connections and coframes are written `A = α − β m − β̄ m̄ + γ m m̄` and
//! `e = θ − τ m − τ̄ m̄ + ζ m m̄`. In the N=1 setting `m` means `m¹`.

use gf_symexpr::{CExpr, Expr, ZeroPolicy, ZeroVerdict};

use crate::error::{CoreError, Result};
use crate::form::OrdForm;
use crate::frame::{covariant_d_adjoint, curvature, so_residual, Coframe, FrameMetric};
use crate::genform::{lift_matrix, matrix_parts, times_m, times_m1, times_mbar, times_mmbar, GenForm, GenMatForm};
use crate::matrix::{invert_scalar, scalar_entries, Algebra, FormMatrix, MatOrdForm};

/// A generalized so(p,q) connection, a square matrix of degree-1 generalized forms.
pub type GenConnection = GenMatForm;

fn require_zero(what: &str, v: ZeroVerdict) -> Result<()> {
    if v.is_zero_like() {
        Ok(())
    } else {
        Err(CoreError::Verification(format!("{what}: {v}")))
    }
}

fn chart_of(m: &GenMatForm) -> crate::chart::ChartRef {
    m.get(0, 0).chart().clone()
}

/// `(α, β, β̄, γ)` read off `A = α − β m − β̄ m̄ + γ m m̄`.
#[derive(Clone, Debug)]
pub struct ConnectionParts {
    pub alpha: MatOrdForm,
    pub beta: MatOrdForm,
    pub beta_bar: MatOrdForm,
    pub gamma: MatOrdForm,
}

pub fn decompose_connection(a: &GenMatForm) -> ConnectionParts {
    let p = matrix_parts(a);
    ConnectionParts {
        alpha: p.pi,
        beta: p.pi1.neg(),
        beta_bar: p.pi2.neg(),
        gamma: p.pitop,
    }
}

pub fn compose_connection(p: &ConnectionParts) -> GenMatForm {
    lift_matrix(&p.alpha)
        .sub(&times_m(&p.beta))
        .sub(&times_mbar(&p.beta_bar))
        .add(&times_mmbar(&p.gamma))
        .with_tag(Algebra::So)
}

/// `(θ, τ, τ̄, ζ)` read off `e = θ − τ m − τ̄ m̄ + ζ m m̄`, as columns.
#[derive(Clone, Debug)]
pub struct CoframeParts {
    pub theta: MatOrdForm,
    pub tau: MatOrdForm,
    pub tau_bar: MatOrdForm,
    pub zeta: MatOrdForm,
}

pub fn decompose_coframe(e: &GenMatForm) -> CoframeParts {
    let p = matrix_parts(e);
    CoframeParts {
        theta: p.pi,
        tau: p.pi1.neg(),
        tau_bar: p.pi2.neg(),
        zeta: p.pitop,
    }
}

pub fn compose_coframe(p: &CoframeParts) -> GenMatForm {
    lift_matrix(&p.theta)
        .sub(&times_m(&p.tau))
        .sub(&times_mbar(&p.tau_bar))
        .add(&times_mmbar(&p.zeta))
}

/// `F = dA + A∧A`.
pub fn gen_curvature(a: &GenConnection) -> GenMatForm {
    a.d().add(&a.mul(a)).with_tag(a.tag)
}

/// `De = de + A∧e` for a column `e`.
pub fn first_cartan_residual(e: &GenMatForm, a: &GenConnection) -> GenMatForm {
    e.d().add(&a.mul(e))
}

/// `DX = dX + A∧X − (−1)^p X∧A` for an adjoint-valued generalized p-form.
pub fn gen_covariant_d_adjoint(a: &GenConnection, x: &GenMatForm) -> GenMatForm {
    let xa = x.mul(a);
    let xa = if x.degree().rem_euclid(2) == 0 { xa } else { xa.neg() };
    x.d().add(&a.mul(x)).sub(&xa)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenBianchi {
    /// `F∧e`
    pub first: ZeroVerdict,
    /// `DF`
    pub second: ZeroVerdict,
    /// `D(De) − F∧e`, an identity for any `e` and `A`.
    pub first_identity: ZeroVerdict,
}

pub fn check_gen_bianchi(f: &GenMatForm, e: &GenMatForm, a: &GenConnection, policy: &ZeroPolicy) -> GenBianchi {
    let fe = f.mul(e);
    let dde = first_cartan_residual(&first_cartan_residual(e, a), a);
    GenBianchi {
        first: fe.verdict(policy),
        second: gen_covariant_d_adjoint(a, f).verdict(policy),
        first_identity: dde.sub(&fe).verdict(policy),
    }
}

/// `Σ_a η_a L^a_c L^a_d − η_cd` with the generalized product.
pub fn gen_group_residual(l: &GenMatForm, eta: &FrameMetric) -> GenMatForm {
    let n = l.rows();
    let chart = chart_of(l);
    FormMatrix::from_fn(n, n, |c, d| {
        let mut acc = if c == d {
            GenForm::scalar(&chart, CExpr::int(-eta.get(c)))
        } else {
            GenForm::zero(&chart, 0)
        };
        for a in 0..n {
            let (x, y) = (l.get(a, c), l.get(a, d));
            if !x.is_zero() && !y.is_zero() {
                acc = &acc + &x.wedge(y).scale_int(eta.get(a));
            }
        }
        acc
    })
}

/// Inverse of a degree-0 generalized matrix with invertible ordinary part
/// `L0`: with `K = L0⁻¹(L − L0)` nilpotent of order three,
/// `L⁻¹ = (1 − K + K²) L0⁻¹`.
pub fn gen_inverse(l: &GenMatForm) -> Result<GenMatForm> {
    let chart = chart_of(l);
    let ord = l.map(|x| x.pi().clone());
    let inv0 = invert_scalar(&scalar_entries(&ord))?;
    let inv0 = lift_matrix(&crate::frame::scalar_matrix(&chart, &inv0));
    let nil = l.sub(&lift_matrix(&ord));
    let k = inv0.mul(&nil);
    let id = FormMatrix::identity(l.rows(), &GenForm::one(&chart));
    Ok(id.sub(&k).add(&k.mul(&k)).mul(&inv0))
}

fn identity_residual(p: &GenMatForm) -> GenMatForm {
    let id = FormMatrix::identity(p.rows(), &GenForm::one(&chart_of(p)));
    p.sub(&id)
}

fn require_so(x: &MatOrdForm, eta: &FrameMetric, what: &str, policy: &ZeroPolicy) -> Result<()> {
    require_zero(&format!("{what} is not so-valued"), so_residual(x, eta).verdict(policy))
}

/// `(δ + l m²)(δ + λ1 m¹) L0` with `l = λ2 + λ m¹`.
#[derive(Clone, Debug)]
pub struct G2Element {
    pub l0: MatOrdForm,
    pub lambda1: MatOrdForm,
    pub lambda2: MatOrdForm,
    pub lambda: MatOrdForm,
    assembled: GenMatForm,
    inverse: GenMatForm,
}

impl G2Element {
    pub fn new(
        l0: MatOrdForm,
        lambda1: MatOrdForm,
        lambda2: MatOrdForm,
        lambda: MatOrdForm,
        eta: &FrameMetric,
        policy: &ZeroPolicy,
    ) -> Result<Self> {
        crate::frame::check_in_group(&l0, eta, policy)?;
        require_so(&lambda1, eta, "λ1", policy)?;
        require_so(&lambda2, eta, "λ2", policy)?;
        require_so(&lambda, eta, "λ", policy)?;
        let chart = l0.get(0, 0).chart().clone();
        let n = l0.rows();
        let id = FormMatrix::identity(n, &GenForm::one(&chart));
        let m2 = GenForm::m2(&chart);
        let l = lift_matrix(&lambda2).add(&times_m1(&lambda));
        let lm2 = l.map(|x| x.wedge(&m2));
        let outer = id.add(&lm2);
        let inner = id.add(&times_m1(&lambda1));
        let l0g = lift_matrix(&l0);
        let assembled = outer.mul(&inner).mul(&l0g);
        let l0inv = lift_matrix(&crate::frame::group_inverse(&l0, eta));
        let inverse = l0inv.mul(&id.sub(&times_m1(&lambda1))).mul(&id.sub(&lm2));
        require_zero(
            "generalized group condition",
            gen_group_residual(&assembled, eta).verdict(policy),
        )?;
        require_zero(
            "explicit inverse",
            identity_residual(&assembled.mul(&inverse)).verdict(policy),
        )?;
        Ok(G2Element {
            l0,
            lambda1,
            lambda2,
            lambda,
            assembled,
            inverse,
        })
    }

    pub fn identity(chart: &crate::chart::ChartRef, eta: &FrameMetric) -> Self {
        let n = eta.dim();
        let one = OrdForm::one(chart);
        let l0 = FormMatrix::identity(n, &one);
        let z1 = FormMatrix::zeros(n, n, &one, 1).with_tag(Algebra::So);
        let z2 = FormMatrix::zeros(n, n, &one, 2).with_tag(Algebra::So);
        G2Element::new(l0, z1.clone(), z1, z2, eta, &ZeroPolicy::SymbolicOnly)
            .expect("identity element")
    }

    pub fn assembled(&self) -> &GenMatForm {
        &self.assembled
    }

    pub fn inverse(&self) -> &GenMatForm {
        &self.inverse
    }

    /// `L⁻¹dL`, a flat generalized connection.
    pub fn maurer_cartan(&self) -> GenMatForm {
        self.inverse.mul(&self.assembled.d()).with_tag(Algebra::So)
    }
}

/// Component residuals of the N=2 first Cartan equations together with the
/// curvature remainder `f = Ϝ − (β + β̄)`.
#[derive(Clone, Debug)]
pub struct N2Expansion {
    pub coframe: CoframeParts,
    pub connection: ConnectionParts,
    /// `Dθ − τ − τ̄`
    pub torsion_line: MatOrdForm,
    /// `[Ϝ − (β + β̄)]θ`
    pub curvature_line: MatOrdForm,
    /// `D(τ − τ̄) + (β̄ − β)θ − 2ζ`
    pub zeta_line: MatOrdForm,
    /// `Dζ + βτ̄ − β̄τ + γθ`
    pub top_line: MatOrdForm,
    pub f: MatOrdForm,
    /// `f_ab + f_ba` after lowering.
    pub f_antisymmetry: ZeroVerdict,
    /// `f^a_b∧θ^b`, the cyclic identity.
    pub f_cyclic: ZeroVerdict,
    /// `2γθ − (τ̄ − τ)f − D(β − β̄)θ`
    pub gamma_consistency: MatOrdForm,
    pub verdicts: [ZeroVerdict; 4],
}

impl N2Expansion {
    pub fn lines(&self) -> [&MatOrdForm; 4] {
        [&self.torsion_line, &self.curvature_line, &self.zeta_line, &self.top_line]
    }

    pub fn all_zero(&self) -> bool {
        self.verdicts.iter().all(|v| v.is_zero_like())
    }
}

fn cov_d_column(alpha: &MatOrdForm, v: &MatOrdForm) -> MatOrdForm {
    v.d().add(&alpha.mul(v))
}

pub fn expand_cartan_n2(e: &GenMatForm, a: &GenConnection, eta: &FrameMetric, policy: &ZeroPolicy) -> Result<N2Expansion> {
    let cp = decompose_coframe(e);
    let ap = decompose_connection(a);
    Coframe::new(cp.theta.entries().to_vec())?;
    let theta = &cp.theta;
    let fk = curvature(&ap.alpha);
    let f = fk.sub(&ap.beta.add(&ap.beta_bar));
    let torsion_line = cov_d_column(&ap.alpha, theta).sub(&cp.tau).sub(&cp.tau_bar);
    let curvature_line = f.mul(theta);
    let tau_diff = cp.tau.sub(&cp.tau_bar);
    let zeta_line = cov_d_column(&ap.alpha, &tau_diff)
        .add(&ap.beta_bar.sub(&ap.beta).mul(theta))
        .sub(&cp.zeta.scale(&CExpr::int(2)));
    let top_line = cov_d_column(&ap.alpha, &cp.zeta)
        .add(&ap.beta.mul(&cp.tau_bar))
        .sub(&ap.beta_bar.mul(&cp.tau))
        .add(&ap.gamma.mul(theta));
    let bdiff = ap.beta.sub(&ap.beta_bar);
    let gamma_consistency = ap
        .gamma
        .mul(theta)
        .scale(&CExpr::int(2))
        .sub(&f.mul(&cp.tau_bar.sub(&cp.tau)))
        .sub(&covariant_d_adjoint(&ap.alpha, &bdiff).mul(theta));
    let verdicts = [
        torsion_line.verdict(policy),
        curvature_line.verdict(policy),
        zeta_line.verdict(policy),
        top_line.verdict(policy),
    ];
    Ok(N2Expansion {
        f_antisymmetry: so_residual(&f, eta).verdict(policy),
        f_cyclic: f.mul(theta).verdict(policy),
        coframe: cp,
        connection: ap,
        torsion_line,
        curvature_line,
        zeta_line,
        top_line,
        f,
        gamma_consistency,
        verdicts,
    })
}

/// `A = α − Ϝ(α) m¹`, flat for every `α`.
pub fn flat_connection_n1(alpha: &MatOrdForm, policy: &ZeroPolicy) -> Result<GenConnection> {
    let a = lift_matrix(alpha).sub(&times_m1(&curvature(alpha))).with_tag(Algebra::So);
    require_zero("N=1 flat connection curvature", gen_curvature(&a).verdict(policy))?;
    Ok(a)
}

/// `L = δ − α m¹` and its inverse `δ + α m¹`.
#[derive(Clone, Debug)]
pub struct N1Element {
    pub l: GenMatForm,
    pub inverse: GenMatForm,
}

pub fn n1_l(alpha: &MatOrdForm, policy: &ZeroPolicy) -> Result<N1Element> {
    let chart = alpha.get(0, 0).chart().clone();
    let id = FormMatrix::identity(alpha.rows(), &GenForm::one(&chart));
    let am = times_m1(alpha);
    let l = id.sub(&am);
    let inverse = id.add(&am);
    require_zero("N=1 inverse", identity_residual(&l.mul(&inverse)).verdict(policy))?;
    let flat = flat_connection_n1(alpha, policy)?;
    require_zero("L⁻¹dL against α − Ϝm¹", inverse.mul(&l.d()).sub(&flat).verdict(policy))?;
    Ok(N1Element { l, inverse })
}

/// `x^a = ξ^a + (dξ^a − θ^a) m¹`.
pub fn n1_gf_coords(theta: &[OrdForm], xi: &[Expr]) -> Result<Vec<GenForm>> {
    if theta.len() != xi.len() {
        return Err(CoreError::Dimension(xi.len()));
    }
    Ok(theta
        .iter()
        .zip(xi)
        .map(|(t, x)| {
            let xf = OrdForm::real_scalar(t.chart(), x.clone());
            let dx = xf.d();
            GenForm::n1(&xf, &(&dx - t))
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct N1Recovery {
    pub coords: Vec<GenForm>,
    /// `L⁻¹ dx` as a column.
    pub recovered: GenMatForm,
    /// `L⁻¹ dx − θ`
    pub residual: GenMatForm,
    /// `Dθ = dθ + αθ`
    pub torsion: MatOrdForm,
    pub verdict: ZeroVerdict,
    /// Residual against `−(Dθ) m¹`.
    pub torsion_match: ZeroVerdict,
}

pub fn n1_recover_coframe(alpha: &MatOrdForm, theta: &[OrdForm], xi: &[Expr], policy: &ZeroPolicy) -> Result<N1Recovery> {
    let el = n1_l(alpha, policy)?;
    let coords = n1_gf_coords(theta, xi)?;
    let x = FormMatrix::column(coords.clone());
    let recovered = el.inverse.mul(&x.d());
    let theta_col = FormMatrix::column(theta.to_vec());
    let residual = recovered.sub(&lift_matrix(&theta_col));
    let torsion = cov_d_column(alpha, &theta_col);
    let torsion_match = residual.add(&times_m1(&torsion)).verdict(policy);
    Ok(N1Recovery {
        verdict: residual.verdict(policy),
        coords,
        recovered,
        residual,
        torsion,
        torsion_match,
    })
}

/// The closed generalized matrix `[δ + dL L⁻¹ m¹] L` and its inverse
/// `[δ − L⁻¹dL m¹] L⁻¹` built from an ordinary invertible `L`.
pub fn closed_lift(l: &MatOrdForm) -> Result<(GenMatForm, GenMatForm)> {
    let chart = l.get(0, 0).chart().clone();
    let linv = crate::frame::scalar_matrix(&chart, &invert_scalar(&scalar_entries(l))?);
    let id = FormMatrix::identity(l.rows(), &GenForm::one(&chart));
    let cl = id.add(&times_m1(&l.d().mul(&linv))).mul(&lift_matrix(l));
    let clinv = id.sub(&times_m1(&linv.mul(&l.d()))).mul(&lift_matrix(&linv));
    Ok((cl, clinv))
}

/// `x → cL⁻¹ x + cp` for closed `cL` and `cp`.
pub fn affine_freedom_apply(x: &[GenForm], cl: &GenMatForm, cp: &[GenForm], policy: &ZeroPolicy) -> Result<Vec<GenForm>> {
    if cl.rows() != x.len() || cp.len() != x.len() {
        return Err(CoreError::Dimension(x.len()));
    }
    let not_closed = |what: &str, v: ZeroVerdict| -> Result<()> {
        if v.is_zero_like() {
            Ok(())
        } else {
            Err(CoreError::NotClosed {
                component: what.to_string(),
                residual: v.to_string(),
            })
        }
    };
    not_closed("cL", cl.d().verdict(policy))?;
    for p in cp {
        not_closed("cp", p.d().verdict(policy))?;
    }
    let clinv = gen_inverse(cl)?;
    let col = clinv.mul(&FormMatrix::column(x.to_vec()));
    Ok((0..x.len()).map(|i| col.get(i, 0) + &cp[i]).collect())
}

/// Flat N=2 connection `A = α − ½(Ϝ + β − β̄)m − ½(Ϝ − β + β̄)m̄ + ½D(β − β̄) m m̄`
/// with `β − β̄ = 2i·imβ`, and the element
/// `L = δ − ½(α + iλ2)m − ½(α − iλ2)m̄ + ½(β − β̄ − i dλ2 − i λ2 α) m m̄`
/// with `L⁻¹dL = A`.
pub fn flat_connection_n2(
    alpha: &MatOrdForm,
    im_beta: &MatOrdForm,
    lambda2: &MatOrdForm,
    eta: &FrameMetric,
    policy: &ZeroPolicy,
) -> Result<(GenConnection, G2Element)> {
    let chart = alpha.get(0, 0).chart().clone();
    let n = alpha.rows();
    let half = CExpr::frac(1, 2);
    let i = CExpr::i();
    let fk = curvature(alpha);
    let bdiff = im_beta.scale(&CExpr::imag(Expr::int(2)));
    let beta = fk.add(&bdiff).scale(&half);
    let beta_bar = fk.sub(&bdiff).scale(&half);
    let gamma = covariant_d_adjoint(alpha, &bdiff).scale(&half);
    let a = compose_connection(&ConnectionParts {
        alpha: alpha.clone(),
        beta,
        beta_bar,
        gamma,
    });
    require_zero("N=2 flat connection curvature", gen_curvature(&a).verdict(policy))?;

    let il2 = lambda2.scale(&i);
    let id = FormMatrix::identity(n, &GenForm::one(&chart));
    let top = bdiff
        .sub(&lambda2.d().scale(&i))
        .sub(&lambda2.mul(alpha).scale(&i))
        .scale(&half);
    let l_direct = id
        .sub(&times_m(&alpha.add(&il2).scale(&half)))
        .sub(&times_mbar(&alpha.sub(&il2).scale(&half)))
        .add(&times_mmbar(&top));

    let one = OrdForm::one(&chart);
    let lambda = im_beta.scale(&CExpr::int(2)).sub(&lambda2.d()).with_tag(Algebra::So);
    let g = G2Element::new(
        FormMatrix::identity(n, &one),
        alpha.neg().with_tag(Algebra::So),
        lambda2.clone(),
        lambda,
        eta,
        policy,
    )?;
    require_zero("group element against direct formula", g.assembled().sub(&l_direct).verdict(policy))?;
    require_zero("L⁻¹dL = A", g.maurer_cartan().sub(&a).verdict(policy))?;
    Ok((a, g))
}
