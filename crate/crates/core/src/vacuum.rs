//! Ricci-flatness as closure of a flat N=2 spinor construction.
//!
//! With the spin connection `ω` and its curvature `Ω`, the pair
//! `A = ω − Ω m`, `Ā = ω̄ − Ω̄ m̄` is always flat, and
//! `dθ + Aθ + Āθ = 0` holds exactly when the metric is Ricci flat. The flat
//! pair integrates to `L = δ − ω m`, `L̄ = δ − ω̄ m̄`, and in vacuum the
//! coframe is `θ = L̄⁻¹ L⁻¹ dx` for the gf-coordinates
//! `x = −½θ m − ½θ m̄ + ½(ω̄θ − ωθ) m m̄`.
//!
//! Primed indices act through [`primed`], unprimed ones by matrix product.

use gf_symexpr::{CExpr, ZeroPolicy, ZeroVerdict};

use crate::cartan::{gen_curvature, gen_inverse};
use crate::error::{CoreError, Result};
use crate::frame::{scalar_matrix, Coframe, FrameMetric, Geometry};
use crate::genform::{lift_matrix, matrix_parts, times_m, times_mbar, times_mmbar, GenForm, GenMatForm};
use crate::matrix::{invert_scalar, scalar_entries, FormMatrix, MatOrdForm};
use crate::spinor::{
    dagger, line_element_residual, primed, spinor_curvature, split_connection, to_spinor_coframe, SpinorCoframe,
};

fn i() -> CExpr {
    CExpr::i()
}

fn half() -> CExpr {
    CExpr::frac(1, 2)
}

/// The flat pair `A = ω − Ω m`, `Ā = ω̄ − Ω̄ m̄` and their curvature verdicts.
#[derive(Clone, Debug)]
pub struct VacuumConnection {
    pub a: GenMatForm,
    pub a_bar: GenMatForm,
    pub flat: ZeroVerdict,
    pub flat_bar: ZeroVerdict,
}

pub fn build_vacuum_connection(ws: &MatOrdForm, curv_s: &MatOrdForm, policy: &ZeroPolicy) -> Result<VacuumConnection> {
    let mismatch = spinor_curvature(ws).sub(curv_s).verdict(policy);
    if !mismatch.is_zero_like() {
        return Err(CoreError::Verification(format!("curvature does not match dω + ωω: {mismatch}")));
    }
    let a = lift_matrix(ws).sub(&times_m(curv_s));
    let a_bar = lift_matrix(&ws.conj()).sub(&times_mbar(&curv_s.conj()));
    let flat = gen_curvature(&a).verdict(policy);
    let flat_bar = gen_curvature(&a_bar).verdict(policy);
    Ok(VacuumConnection {
        a,
        a_bar,
        flat,
        flat_bar,
    })
}

/// `dθ^{AA'} + A^A_B θ^{BA'} + Ā^{A'}_{B'} θ^{AB'}` split by slot.
#[derive(Clone, Debug)]
pub struct CombinedResidual {
    pub residual: GenMatForm,
    /// ordinary slot: torsion
    pub ordinary: ZeroVerdict,
    /// `m` slot: `Ω^A_B θ^{BA'}`
    pub m: ZeroVerdict,
    pub mbar: ZeroVerdict,
    pub mmbar: ZeroVerdict,
}

impl CombinedResidual {
    pub fn all(&self) -> ZeroVerdict {
        ZeroVerdict::all([
            self.ordinary.clone(),
            self.m.clone(),
            self.mbar.clone(),
            self.mmbar.clone(),
        ])
    }
}

pub fn combined_equation_residual(
    theta: &SpinorCoframe,
    a: &GenMatForm,
    a_bar: &GenMatForm,
    policy: &ZeroPolicy,
) -> CombinedResidual {
    let t = lift_matrix(&theta.theta);
    let residual = t.d().add(&a.mul(&t)).add(&primed(a_bar, &t));
    let p = matrix_parts(&residual);
    CombinedResidual {
        ordinary: p.pi.verdict(policy),
        m: p.pi1.verdict(policy),
        mbar: p.pi2.verdict(policy),
        mmbar: p.pitop.verdict(policy),
        residual,
    }
}

/// `L = δ − ω m`, `L̄ = δ − ω̄ m̄` with inverses `δ + ω m`, `δ + ω̄ m̄`.
#[derive(Clone, Debug)]
pub struct LPair {
    pub l: GenMatForm,
    pub l_inv: GenMatForm,
    pub l_bar: GenMatForm,
    pub l_bar_inv: GenMatForm,
}

#[derive(Clone, Debug)]
pub struct LPairChecks {
    /// `L L⁻¹ − δ` and its conjugate
    pub inverse: ZeroVerdict,
    /// `L⁻¹dL − A`
    pub maurer_cartan: ZeroVerdict,
    pub maurer_cartan_bar: ZeroVerdict,
    /// `ε_AB L^A_C L^B_D − ε_CD`, i.e. `det L = 1`
    pub unit_determinant: ZeroVerdict,
}

pub fn build_l_pair(ws: &MatOrdForm, ws_bar: &MatOrdForm) -> LPair {
    let chart = ws.get(0, 0).chart().clone();
    let id = FormMatrix::identity(2, &GenForm::one(&chart));
    LPair {
        l: id.sub(&times_m(ws)),
        l_inv: id.add(&times_m(ws)),
        l_bar: id.sub(&times_mbar(ws_bar)),
        l_bar_inv: id.add(&times_mbar(ws_bar)),
    }
}

fn gen_det2(m: &GenMatForm) -> GenForm {
    m.get(0, 0).wedge(m.get(1, 1)).add(&m.get(0, 1).wedge(m.get(1, 0)).neg())
}

impl LPair {
    /// `ω` read back from the `m` slot of `L`.
    pub fn omega(&self) -> MatOrdForm {
        matrix_parts(&self.l).pi1.neg()
    }

    pub fn omega_bar(&self) -> MatOrdForm {
        matrix_parts(&self.l_bar).pi2.neg()
    }

    pub fn check(&self, conn: &VacuumConnection, policy: &ZeroPolicy) -> LPairChecks {
        let chart = self.l.get(0, 0).chart().clone();
        let id = FormMatrix::identity(2, &GenForm::one(&chart));
        let inv = self.l.mul(&self.l_inv).sub(&id);
        let inv_bar = self.l_bar.mul(&self.l_bar_inv).sub(&id);
        let one = GenForm::one(&chart);
        let det = gen_det2(&self.l).add(&one.neg());
        let det_bar = gen_det2(&self.l_bar).add(&one.neg());
        LPairChecks {
            inverse: ZeroVerdict::all([inv.verdict(policy), inv_bar.verdict(policy)]),
            maurer_cartan: self.l_inv.mul(&self.l.d()).sub(&conn.a).verdict(policy),
            maurer_cartan_bar: self.l_bar_inv.mul(&self.l_bar.d()).sub(&conn.a_bar).verdict(policy),
            unit_determinant: ZeroVerdict::all([det.verdict(policy), det_bar.verdict(policy)]),
        }
    }
}

/// `x = ξ − μ m − μ̄ m̄ + iν m m̄`, with `μ̄^{AA'}` the conjugate transpose.
pub fn coords_from_parts(xi: &MatOrdForm, mu: &MatOrdForm, nu: &MatOrdForm) -> GenMatForm {
    lift_matrix(xi)
        .sub(&times_m(mu))
        .sub(&times_mbar(&dagger(mu)))
        .add(&times_mmbar(&nu.scale(&i())))
}

/// `μ = ½θ`, `ν = (i/2)(ωθ − ω̄θ)`.
pub fn vacuum_mu_nu(theta: &SpinorCoframe, ws: &MatOrdForm, ws_bar: &MatOrdForm) -> (MatOrdForm, MatOrdForm) {
    let t = &theta.theta;
    let mu = t.scale(&half());
    let nu = ws.mul(t).sub(&primed(ws_bar, t)).scale(&(&i() * &half()));
    (mu, nu)
}

pub fn vacuum_gf_coords(theta: &SpinorCoframe, ws: &MatOrdForm, ws_bar: &MatOrdForm) -> GenMatForm {
    let (mu, nu) = vacuum_mu_nu(theta, ws, ws_bar);
    let xi = FormMatrix::zeros(2, 2, theta.theta.get(0, 0), 0);
    coords_from_parts(&xi, &mu, &nu)
}

/// `e^{AA'} = (L̄⁻¹)^{A'}_{B'} (L⁻¹)^A_B dx^{BB'}`.
pub fn coframe_from_coords(l: &LPair, x: &GenMatForm) -> GenMatForm {
    primed(&l.l_bar_inv, &l.l_inv.mul(&x.d()))
}

/// Verdict for one matrix condition plus the first entry that fails it.
#[derive(Clone, Debug)]
pub struct Condition {
    pub name: &'static str,
    pub verdict: ZeroVerdict,
    pub offending: Option<(usize, usize, String)>,
}

impl Condition {
    fn new(name: &'static str, m: &MatOrdForm, policy: &ZeroPolicy) -> Self {
        Self::of_all(name, &[m], policy)
    }

    fn of_all(name: &'static str, ms: &[&MatOrdForm], policy: &ZeroPolicy) -> Self {
        let mut all = Vec::new();
        let mut offending = None;
        for m in ms {
            for ((r, c), v) in m.entry_verdicts(policy) {
                if offending.is_none() && !v.is_zero_like() {
                    offending = Some((r, c, m.get(r, c).to_string()));
                }
                all.push(v);
            }
        }
        Condition {
            name,
            verdict: ZeroVerdict::all(all),
            offending,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.is_zero_like()
    }
}

/// The conditions under which `L̄⁻¹L⁻¹dx` is an ordinary form, for `x` in
/// the normal form `−μ m − μ̄ m̄ + iν m m̄`.
#[derive(Clone, Debug)]
pub struct Ordinariness {
    /// `x` has no ordinary part and its `m̄` slot is `−μ̄`
    pub normal_form: Condition,
    /// `Dμ = dμ + ωμ + ω̄μ = 0`
    pub covariant_mu: Condition,
    /// `ν − i(ωμ − ω̄μ) = 0`
    pub nu_relation: Condition,
    /// `Ωμ − Ω̄μ = 0`
    pub curvature_balance: Condition,
}

impl Ordinariness {
    pub fn conditions(&self) -> [&Condition; 4] {
        [&self.normal_form, &self.covariant_mu, &self.nu_relation, &self.curvature_balance]
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|c| c.holds())
    }
}

/// `(μ, ν)` read from the `m` and `m m̄` slots.
pub fn mu_nu_of(x: &GenMatForm) -> (MatOrdForm, MatOrdForm) {
    let p = matrix_parts(x);
    (p.pi1.neg(), p.pitop.scale(&-i()))
}

pub fn ordinariness(x: &GenMatForm, ws: &MatOrdForm, ws_bar: &MatOrdForm, policy: &ZeroPolicy) -> Ordinariness {
    let p = matrix_parts(x);
    let (mu, nu) = mu_nu_of(x);
    let mbar_slot = p.pi2.add(&dagger(&mu));
    let curv = spinor_curvature(ws);
    let curv_bar = spinor_curvature(ws_bar);
    let d_mu = mu.d().add(&ws.mul(&mu)).add(&primed(ws_bar, &mu));
    let nu_rel = nu.sub(&ws.mul(&mu).sub(&primed(ws_bar, &mu)).scale(&i()));
    let balance = curv.mul(&mu).sub(&primed(&curv_bar, &mu));
    Ordinariness {
        normal_form: Condition::of_all("normal form", &[&p.pi, &mbar_slot], policy),
        covariant_mu: Condition::new("D mu = 0", &d_mu, policy),
        nu_relation: Condition::new("nu = i(omega mu - omegabar mu)", &nu_rel, policy),
        curvature_balance: Condition::new("Omega mu - Omegabar mu = 0", &balance, policy),
    }
}

/// The four slots of `L̄⁻¹L⁻¹dx` written out in terms of `μ`, `ν`:
/// `2μ`, `−(dμ + 2ωμ + iν)`, `−(dμ + 2ω̄μ − iν)`,
/// `i(dν + ω̄ν + ων) + ω̄dμ − ωdμ − 2ωω̄μ`.
pub fn expanded_slots(ws: &MatOrdForm, ws_bar: &MatOrdForm, mu: &MatOrdForm, nu: &MatOrdForm) -> [MatOrdForm; 4] {
    let two = CExpr::int(2);
    let dmu = mu.d();
    let inu = nu.scale(&i());
    let ord = mu.scale(&two);
    let m = dmu.add(&ws.mul(mu).scale(&two)).add(&inu).neg();
    let mbar = dmu.add(&primed(ws_bar, mu).scale(&two)).sub(&inu).neg();
    let top = nu
        .d()
        .add(&primed(ws_bar, nu))
        .add(&ws.mul(nu))
        .scale(&i())
        .add(&primed(ws_bar, &dmu))
        .sub(&ws.mul(&dmu))
        .sub(&ws.mul(&primed(ws_bar, mu)).scale(&two));
    [ord, m, mbar, top]
}

/// Direct product against [`expanded_slots`], slot by slot.
#[derive(Clone, Debug)]
pub struct ExpansionCheck {
    pub direct: [MatOrdForm; 4],
    pub expanded: [MatOrdForm; 4],
    pub agree: [ZeroVerdict; 4],
}

impl ExpansionCheck {
    pub fn consistent(&self) -> bool {
        self.agree.iter().all(|v| v.is_zero_like())
    }
}

pub fn expansion_check(
    ws: &MatOrdForm,
    ws_bar: &MatOrdForm,
    mu: &MatOrdForm,
    nu: &MatOrdForm,
    policy: &ZeroPolicy,
) -> ExpansionCheck {
    let l = build_l_pair(ws, ws_bar);
    let xi = FormMatrix::zeros(2, 2, mu.get(0, 0), 0);
    let x = coords_from_parts(&xi, mu, nu);
    let e = matrix_parts(&coframe_from_coords(&l, &x));
    let direct = [e.pi, e.pi1, e.pi2, e.pitop];
    let expanded = expanded_slots(ws, ws_bar, mu, nu);
    let agree = [0, 1, 2, 3].map(|k| direct[k].sub(&expanded[k]).verdict(policy));
    ExpansionCheck {
        direct,
        expanded,
        agree,
    }
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub e: GenMatForm,
    pub conditions: Ordinariness,
    /// non-ordinary slots of `e`
    pub generalized_part: ZeroVerdict,
    /// `e − θ`, only computed when `e` is ordinary
    pub matches_theta: Option<ZeroVerdict>,
}

impl Recovery {
    pub fn recovered(&self) -> bool {
        self.matches_theta.as_ref().is_some_and(|v| v.is_zero_like())
    }
}

pub fn recover_coframe(l: &LPair, x: &GenMatForm, theta: &SpinorCoframe, policy: &ZeroPolicy) -> Recovery {
    let (ws, ws_bar) = (l.omega(), l.omega_bar());
    let e = coframe_from_coords(l, x);
    let p = matrix_parts(&e);
    let generalized_part = ZeroVerdict::all([p.pi1.verdict(policy), p.pi2.verdict(policy), p.pitop.verdict(policy)]);
    let conditions = ordinariness(x, &ws, &ws_bar, policy);
    let matches_theta = if conditions.all_hold() && generalized_part.is_zero_like() {
        Some(p.pi.sub(&theta.theta).verdict(policy))
    } else {
        None
    };
    Recovery {
        e,
        conditions,
        generalized_part,
        matches_theta,
    }
}

/// Closed lift of an ordinary `SL(2,C)`-valued `S` along a nilpotent
/// generator `g` (`m` for unprimed, `m̄` for primed indices):
/// `[δ + dS S⁻¹ g] S` and inverse `[δ − S⁻¹dS g] S⁻¹`.
pub fn closed_lift_along(s: &MatOrdForm, g: &GenForm) -> Result<(GenMatForm, GenMatForm)> {
    let chart = s.get(0, 0).chart().clone();
    let sinv = scalar_matrix(&chart, &invert_scalar(&scalar_entries(s))?);
    let id = FormMatrix::identity(s.rows(), &GenForm::one(&chart));
    let along = |m: &MatOrdForm| m.map(|x| GenForm::ordinary(x).wedge(g));
    let cl = id.add(&along(&s.d().mul(&sinv))).mul(&lift_matrix(s));
    let clinv = id.sub(&along(&sinv.mul(&s.d()))).mul(&lift_matrix(&sinv));
    Ok((cl, clinv))
}

/// `(cL, cL⁻¹, c̄L, c̄L⁻¹)` for an ordinary spinor transformation `S`.
pub fn spinor_closed_pair(s: &MatOrdForm) -> Result<[GenMatForm; 4]> {
    let chart = s.get(0, 0).chart().clone();
    let (cl, clinv) = closed_lift_along(s, &GenForm::m(&chart))?;
    let (clb, clbinv) = closed_lift_along(&s.conj(), &GenForm::mbar(&chart))?;
    Ok([cl, clinv, clb, clbinv])
}

/// `x → cL⁻¹ c̄L⁻¹ x + cp` for closed `cL`, `c̄L`, `cp`.
pub fn poincare_transform(
    x: &GenMatForm,
    cl: &GenMatForm,
    cl_bar: &GenMatForm,
    cp: &GenMatForm,
    policy: &ZeroPolicy,
) -> Result<GenMatForm> {
    for (what, m) in [("cL", cl), ("cLbar", cl_bar), ("cp", cp)] {
        let v = m.d().verdict(policy);
        if !v.is_zero_like() {
            return Err(CoreError::NotClosed {
                component: what.into(),
                residual: v.to_string(),
            });
        }
    }
    let inv = gen_inverse(cl)?;
    let inv_bar = gen_inverse(cl_bar)?;
    Ok(primed(&inv_bar, &inv.mul(x)).add(cp))
}

/// Ordinary spinor gauge transformation by `S`:
/// `θ₁ = S⁻¹ θ S̄⁻¹ᵀ`, `ω₁ = S⁻¹dS + S⁻¹ω S`.
pub fn spinor_gauge(theta: &SpinorCoframe, ws: &MatOrdForm, s: &MatOrdForm) -> Result<(SpinorCoframe, MatOrdForm)> {
    let chart = s.get(0, 0).chart().clone();
    let sinv = scalar_matrix(&chart, &invert_scalar(&scalar_entries(s))?);
    let theta1 = primed(&sinv.conj(), &sinv.mul(&theta.theta));
    let ws1 = sinv.mul(&s.d()).add(&sinv.mul(ws).mul(s));
    Ok((SpinorCoframe { theta: theta1 }, ws1))
}

/// Transformed `(μ₁, ν₁)` in closed form, with `P = S⁻¹`: `μ₁ = P̄Pμ`,
/// `ν₁ = P̄Pν − i P̄ dP μ + i dP̄ P μ`. The correction terms are what keeps
/// `ν = i(ωμ − ω̄μ)` covariant.
pub fn gauge_mu_nu(s: &MatOrdForm, mu: &MatOrdForm, nu: &MatOrdForm) -> Result<(MatOrdForm, MatOrdForm)> {
    let chart = s.get(0, 0).chart().clone();
    let sinv = scalar_matrix(&chart, &invert_scalar(&scalar_entries(s))?);
    let sbinv = sinv.conj();
    let mu1 = primed(&sbinv, &sinv.mul(mu));
    let nu1 = primed(&sbinv, &sinv.mul(nu))
        .sub(&primed(&sbinv, &sinv.d().mul(mu)).scale(&i()))
        .add(&primed(&sbinv.d(), &sinv.mul(mu)).scale(&i()));
    Ok((mu1, nu1))
}

/// `εε e⊗e = εε θ⊗θ` and `εε dx⊗dx = εε θ⊗θ` using ordinary slots.
pub fn line_element_chain(e: &GenMatForm, x: &GenMatForm, coframe: &Coframe, eta: &FrameMetric, policy: &ZeroPolicy) -> [ZeroVerdict; 2] {
    let domain = coframe.chart().domain();
    let check = |m: &MatOrdForm| {
        ZeroVerdict::all(
            line_element_residual(m, coframe, eta)
                .iter()
                .flatten()
                .map(|z| gf_symexpr::is_zero_complex(z, policy, domain)),
        )
    };
    [check(&matrix_parts(e).pi), check(&matrix_parts(&x.d()).pi)]
}

/// Everything the vacuum pipeline produces for one metric.
#[derive(Clone, Debug)]
pub struct VacuumReport {
    pub theta: SpinorCoframe,
    pub omega: MatOrdForm,
    pub connection: VacuumConnection,
    pub combined: CombinedResidual,
    pub l_pair: LPairChecks,
    pub x: GenMatForm,
    pub recovery: Recovery,
    pub expansion: ExpansionCheck,
    pub line_element: [ZeroVerdict; 2],
}

impl VacuumReport {
    /// The vacuum verdict carried by the combined equation.
    pub fn vacuum(&self) -> ZeroVerdict {
        self.combined.all()
    }
}

pub fn encode_vacuum(g: &Geometry, policy: &ZeroPolicy) -> Result<VacuumReport> {
    let theta = to_spinor_coframe(&g.coframe, &g.eta, policy)?;
    let ws = split_connection(&g.omega);
    let ws_bar = ws.conj();
    let curv = spinor_curvature(&ws);
    let connection = build_vacuum_connection(&ws, &curv, policy)?;
    let combined = combined_equation_residual(&theta, &connection.a, &connection.a_bar, policy);
    let pair = build_l_pair(&ws, &ws_bar);
    let l_pair = pair.check(&connection, policy);
    let x = vacuum_gf_coords(&theta, &ws, &ws_bar);
    let recovery = recover_coframe(&pair, &x, &theta, policy);
    let (mu, nu) = vacuum_mu_nu(&theta, &ws, &ws_bar);
    let expansion = expansion_check(&ws, &ws_bar, &mu, &nu, policy);
    let line_element = line_element_chain(&recovery.e, &x, &g.coframe, &g.eta, policy);
    Ok(VacuumReport {
        theta,
        omega: ws,
        connection,
        combined,
        l_pair,
        x,
        recovery,
        expansion,
        line_element,
    })
}
