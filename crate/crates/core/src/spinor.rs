//! Two-component spinor form of Lorentzian coframes and connections.
//!
//! Conventions: frame metric `diag(+1, −1, −1, −1)`, frame index 0 timelike
//! and 1, 2, 3 paired with `σx, σy, σz`. The soldering form is
//! `θ^{AA'} = (1/√2) σ_a^{AA'} θ^a`, `ε_01 = 1`, spinor indices raised and
//! lowered northwest to southeast. An so(1,3) matrix `M` corresponds to the
//! trace-free `S` with `σ(Mv) = S σ(v) + σ(v) S†`:
//! `S = ½ Σ_i M^0_i σ_i − (i/2)(M^3_2 σx + M^1_3 σy + M^2_1 σz)`.

use gf_symexpr::{CExpr, Complex64, Expr, ZeroPolicy, ZeroVerdict};

use crate::chart::ChartRef;
use crate::error::{CoreError, Result};
use crate::form::OrdForm;
use crate::frame::{scalar_matrix, Coframe, FrameMetric};
use crate::matrix::{scalar_entries, Algebra, FormMatrix, Graded, MatOrdForm};

type C2 = [[CExpr; 2]; 2];

fn c(re: i64, im: i64) -> CExpr {
    CExpr::new(Expr::int(re), Expr::int(im))
}

/// `σ_0 = 1, σ_1 = σx, σ_2 = σy, σ_3 = σz`.
pub fn pauli() -> [C2; 4] {
    [
        [[c(1, 0), c(0, 0)], [c(0, 0), c(1, 0)]],
        [[c(0, 0), c(1, 0)], [c(1, 0), c(0, 0)]],
        [[c(0, 0), c(0, -1)], [c(0, 1), c(0, 0)]],
        [[c(1, 0), c(0, 0)], [c(0, 0), c(-1, 0)]],
    ]
}

fn constant(chart: &ChartRef, m: &C2) -> MatOrdForm {
    scalar_matrix(chart, &[m[0].to_vec(), m[1].to_vec()])
}

/// Entrywise conjugate transpose.
pub fn dagger(m: &MatOrdForm) -> MatOrdForm {
    m.conj().transpose()
}

fn require_lorentzian(eta: &FrameMetric) -> Result<()> {
    if *eta != FrameMetric::lorentzian() {
        return Err(CoreError::Signature {
            expected: "+---".into(),
            found: eta.to_string(),
        });
    }
    Ok(())
}

/// Hermitian 2×2 matrix of one-forms `θ^{AA'}`.
#[derive(Clone, Debug)]
pub struct SpinorCoframe {
    pub theta: MatOrdForm,
}

impl SpinorCoframe {
    pub fn get(&self, a: usize, ap: usize) -> &OrdForm {
        self.theta.get(a, ap)
    }

    pub fn hermiticity_residual(&self) -> MatOrdForm {
        self.theta.sub(&dagger(&self.theta))
    }
}

/// `(1/√2) σ_a θ^a`.
pub fn soldering(frame_forms: &[OrdForm]) -> MatOrdForm {
    let chart = frame_forms[0].chart().clone();
    let s = pauli();
    let k = CExpr::real(Expr::frac(1, 2).sqrt());
    FormMatrix::from_fn(2, 2, |i, j| {
        let mut acc = OrdForm::zero(&chart, 1);
        for (a, t) in frame_forms.iter().enumerate() {
            if !s[a][i][j].is_zero() {
                acc = acc + t.scale(&(&s[a][i][j] * &k));
            }
        }
        acc
    })
}

/// Symmetric coordinate components `½(α_μ β_ν + α_ν β_μ)` of `α ⊗ β`.
fn sym_product(alpha: &OrdForm, beta: &OrdForm) -> Vec<Vec<CExpr>> {
    let n = alpha.chart().dim();
    let half = CExpr::frac(1, 2);
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let a = &alpha.coeff(1 << mu) * &beta.coeff(1 << nu);
                    let b = &alpha.coeff(1 << nu) * &beta.coeff(1 << mu);
                    &half * &(a + b)
                })
                .collect()
        })
        .collect()
}

fn add_into(acc: &mut [Vec<CExpr>], m: &[Vec<CExpr>], k: i64) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (x, y) in ra.iter_mut().zip(rm) {
            if !y.is_zero() {
                *x = &*x + &y.scale(&Expr::int(k));
            }
        }
    }
}

/// `η_ab θ^a θ^b − ε_AB ε_A'B' θ^{AA'} θ^{BB'}` as symmetric coordinate components.
pub fn line_element_residual(x: &MatOrdForm, coframe: &Coframe, eta: &FrameMetric) -> Vec<Vec<CExpr>> {
    let n = coframe.chart().dim();
    let mut acc = vec![vec![CExpr::zero(); n]; n];
    for (a, t) in coframe.forms().iter().enumerate() {
        add_into(&mut acc, &sym_product(t, t), eta.get(a));
    }
    // ε_AB ε_A'B' with ε_01 = 1
    let eps = |a: usize, b: usize| -> i64 {
        match (a, b) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        }
    };
    for a in 0..2 {
        for ap in 0..2 {
            for b in 0..2 {
                for bp in 0..2 {
                    let k = eps(a, b) * eps(ap, bp);
                    if k != 0 {
                        add_into(&mut acc, &sym_product(x.get(a, ap), x.get(b, bp)), -k);
                    }
                }
            }
        }
    }
    acc
}

pub fn to_spinor_coframe(coframe: &Coframe, eta: &FrameMetric, policy: &ZeroPolicy) -> Result<SpinorCoframe> {
    require_lorentzian(eta)?;
    let s = SpinorCoframe {
        theta: soldering(coframe.forms()),
    };
    let herm = s.hermiticity_residual().verdict(policy);
    if !herm.is_zero_like() {
        return Err(CoreError::Verification(format!("spinor coframe not Hermitian: {herm}")));
    }
    let domain = coframe.chart().domain();
    let rec = line_element_residual(&s.theta, coframe, eta);
    let v = ZeroVerdict::all(rec.iter().flatten().map(|z| gf_symexpr::is_zero_complex(z, policy, domain)));
    if !v.is_zero_like() {
        return Err(CoreError::Verification(format!("line element reconstruction: {v}")));
    }
    Ok(s)
}

/// so(1,3) matrix of forms to the trace-free 2×2 part `ω^A_B`.
pub fn split_connection(omega: &MatOrdForm) -> MatOrdForm {
    let chart = omega.get(0, 0).chart().clone();
    let deg = omega.degree();
    let s = pauli();
    let half = CExpr::frac(1, 2);
    let mhalf_i = CExpr::imag(Expr::frac(-1, 2));
    // (coefficient form, Pauli index)
    let pieces: Vec<(OrdForm, usize, &CExpr)> = vec![
        (omega.get(0, 1).clone(), 1, &half),
        (omega.get(0, 2).clone(), 2, &half),
        (omega.get(0, 3).clone(), 3, &half),
        (omega.get(3, 2).clone(), 1, &mhalf_i),
        (omega.get(1, 3).clone(), 2, &mhalf_i),
        (omega.get(2, 1).clone(), 3, &mhalf_i),
    ];
    FormMatrix::from_fn(2, 2, |i, j| {
        let mut acc = OrdForm::zero(&chart, deg);
        for (f, p, k) in pieces.iter() {
            let e = &s[*p][i][j];
            if !e.is_zero() && !f.is_zero() {
                acc = acc + f.scale(&(e * *k));
            }
        }
        acc
    })
    .with_tag(Algebra::Sl2)
}

/// Inverse of the split: `M^a_b = ½ tr(σ_a S σ_b) + ½ tr(σ_a σ_b S†)`.
pub fn recombine(ws: &MatOrdForm) -> MatOrdForm {
    let chart = ws.get(0, 0).chart().clone();
    let s = pauli();
    let sd = dagger(ws);
    let half = CExpr::frac(1, 2);
    FormMatrix::from_fn(4, 4, |a, b| {
        let sa = constant(&chart, &s[a]);
        let sb = constant(&chart, &s[b]);
        let t1 = sa.mul(ws).mul(&sb).trace();
        let t2 = sa.mul(&sb).mul(&sd).trace();
        (t1 + t2).scale(&half)
    })
    .with_tag(Algebra::So)
}

/// `Ω^A_B = dω^A_B + ω^A_C ω^C_B`.
pub fn spinor_curvature(ws: &MatOrdForm) -> MatOrdForm {
    ws.d().add(&ws.mul(ws)).with_tag(Algebra::Sl2)
}

/// `Ω^A_B ∧ θ^{BA'}`.
pub fn vacuum_residual(curv_s: &MatOrdForm, x: &SpinorCoframe) -> MatOrdForm {
    curv_s.mul(&x.theta)
}

/// Action on the primed index: `Σ_B' a^{A'}_{B'} ∧ x^{AB'}`, in that order.
pub fn primed<F: Graded>(a: &FormMatrix<F>, x: &FormMatrix<F>) -> FormMatrix<F> {
    let deg = a.degree() + x.degree();
    let zero = x.get(0, 0).zero_like(deg);
    FormMatrix::from_fn(x.rows(), a.rows(), |i, ip| {
        let mut acc = zero.clone();
        for bp in 0..a.cols() {
            let (u, v) = (a.get(ip, bp), x.get(i, bp));
            if !u.vanishes() && !v.vanishes() {
                acc = acc.plus(&u.wedge(v));
            }
        }
        acc
    })
}

/// `dθ^{AA'} + ω^A_B θ^{BA'} + ω̄^{A'}_{B'} θ^{AB'}`.
pub fn spinor_first_cartan(x: &SpinorCoframe, ws: &MatOrdForm, ws_bar: &MatOrdForm) -> MatOrdForm {
    let t = &x.theta;
    t.d().add(&ws.mul(t)).add(&primed(ws_bar, t))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorBianchi {
    /// `Ω^A_B θ^{BA'} + Ω̄^{A'}_{B'} θ^{AB'}`
    pub first: ZeroVerdict,
    /// `DΩ^A_B`
    pub second: ZeroVerdict,
}

pub fn spinor_bianchi(curv_s: &MatOrdForm, x: &SpinorCoframe, ws: &MatOrdForm, policy: &ZeroPolicy) -> SpinorBianchi {
    let t = &x.theta;
    let first = curv_s.mul(t).add(&primed(&curv_s.conj(), t));
    let second = curv_s.d().add(&ws.mul(curv_s)).sub(&curv_s.mul(ws));
    SpinorBianchi {
        first: first.verdict(policy),
        second: second.verdict(policy),
    }
}

fn det2(m: &[Vec<CExpr>]) -> CExpr {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn det4(m: &[Vec<CExpr>]) -> CExpr {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = CExpr::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<CExpr>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][j] * &det4(&minor);
        acc = if j % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

/// Principal square root of a complex scalar expression.
fn complex_sqrt(z: &CExpr, chart: &ChartRef) -> CExpr {
    if z.im.is_zero() {
        let negative = sample_value(z, chart).is_some_and(|v| v.re < 0.0);
        return if negative {
            CExpr::imag((-&z.re).sqrt())
        } else {
            CExpr::real(z.re.sqrt())
        };
    }
    let modulus = (&z.re * &z.re + &z.im * &z.im).sqrt();
    let half = Expr::frac(1, 2);
    let re = ((&modulus + &z.re) * &half).sqrt();
    let im = ((&modulus - &z.re) * &half).sqrt();
    // sign of the imaginary part follows Im z; evaluated at a sample point by the caller
    CExpr::new(re, im)
}

fn sample_value(z: &CExpr, chart: &ChartRef) -> Option<Complex64> {
    let syms = z.symbols();
    let point = chart.domain().sample_points(&syms, 1, 1).into_iter().next()?;
    z.eval(&point).ok()
}

/// Lift of a proper orthochronous Lorentz matrix to `SL(2,C)`: `S` with
/// `S σ_b S† = L^a_b σ_a` and `det S = 1`. With `M_N = Σ_ab L^a_b σ_a N σ_b
/// = 2 tr(S† N) S` for a constant `N`, `S = M_N / √det M_N`; the sign makes
/// `Re tr S ≥ 0`, ties resolved toward a positive first nonzero entry.
pub fn lorentz_to_sl2(l: &MatOrdForm, policy: &ZeroPolicy) -> Result<(MatOrdForm, MatOrdForm)> {
    let chart = l.get(0, 0).chart().clone();
    let eta = FrameMetric::lorentzian();
    crate::frame::check_in_group(l, &eta, policy)?;
    let le = scalar_entries(l);
    let det = det4(&le);
    let dv = gf_symexpr::is_zero_complex(&(det - CExpr::one()), policy, chart.domain());
    if !dv.is_zero_like() {
        return Err(CoreError::NotOrthochronous(format!("determinant is not 1 ({dv})")));
    }
    match sample_value(&le[0][0], &chart) {
        Some(v) if v.re >= 1.0 - 1e-9 => {}
        _ => return Err(CoreError::NotOrthochronous("L^0_0 < 1".into())),
    }
    let s = pauli();
    let mut chosen = None;
    for nmat in s.iter() {
        let mut m = vec![vec![CExpr::zero(); 2]; 2];
        for a in 0..4 {
            for b in 0..4 {
                if le[a][b].is_zero() {
                    continue;
                }
                for i in 0..2 {
                    for j in 0..2 {
                        let mut e = CExpr::zero();
                        for p in 0..2 {
                            for q in 0..2 {
                                e = e + &(&s[a][i][p] * &nmat[p][q]) * &s[b][q][j];
                            }
                        }
                        m[i][j] = &m[i][j] + &(&le[a][b] * &e);
                    }
                }
            }
        }
        let d = det2(&m);
        if !d.is_zero() {
            chosen = Some((m, d));
            break;
        }
    }
    let (m, d) = chosen.ok_or_else(|| CoreError::Verification("no nondegenerate lift".into()))?;
    let mut root = complex_sqrt(&d, &chart);
    if let (Some(dv), Some(rv)) = (sample_value(&d, &chart), sample_value(&root, &chart)) {
        if (rv * rv - dv).norm() > 1e-6 * (1.0 + dv.norm()) {
            root = CExpr::new(root.re.clone(), -&root.im);
        }
    }
    let mut sm: Vec<Vec<CExpr>> = m.iter().map(|r| r.iter().map(|x| x / &root).collect()).collect();
    let tr = &sm[0][0] + &sm[1][1];
    let flip = match sample_value(&tr, &chart) {
        Some(t) if t.re.abs() > 1e-12 => t.re < 0.0,
        _ => {
            let first = sm
                .iter()
                .flatten()
                .filter_map(|x| sample_value(x, &chart))
                .find(|v| v.norm() > 1e-12);
            match first {
                Some(v) if v.re.abs() > 1e-12 => v.re < 0.0,
                Some(v) => v.im < 0.0,
                None => false,
            }
        }
    };
    if flip {
        sm = sm.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect();
    }
    let sl = scalar_matrix(&chart, &sm);
    let sd = dagger(&sl);
    let mut residual = FormMatrix::zeros(2, 2, &OrdForm::one(&chart), 0);
    for b in 0..4 {
        let mut r = sl.mul(&constant(&chart, &s[b])).mul(&sd);
        for (a, sa) in s.iter().enumerate() {
            r = r.sub(&constant(&chart, sa).scale(&le[a][b]));
        }
        residual = residual.add(&r.map(|x| x.scale_int(1 + b as i64)));
    }
    let v = FormMatrix::new(1, 1, vec![OrdForm::scalar(&chart, det2(&sm) - CExpr::one())])
        .verdict(policy);
    if !v.is_zero_like() {
        return Err(CoreError::Verification(format!("lift determinant: {v}")));
    }
    let rv = residual.verdict(policy);
    if !rv.is_zero_like() {
        return Err(CoreError::Verification(format!("lift does not reproduce L: {rv}")));
    }
    let bar = sl.conj();
    Ok((sl, bar))
}

/// Frame components `R^a_bcd` of a curvature matrix of two-forms.
pub fn frame_riemann(curv: &MatOrdForm, coframe: &Coframe) -> Vec<Vec<Vec<Vec<CExpr>>>> {
    let n = curv.rows();
    (0..n)
        .map(|a| {
            let comps: Vec<OrdForm> = (0..n).map(|b| coframe.expand(curv.get(a, b))).collect();
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|c| {
                            (0..n)
                                .map(|d| {
                                    if c == d {
                                        CExpr::zero()
                                    } else if c < d {
                                        comps[b].coeff((1 << c) | (1 << d))
                                    } else {
                                        -comps[b].coeff((1 << c) | (1 << d))
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `Ψ₂ = −C_abcd l^a m^b m̄^c n^d` in the null frame
/// `l = (e_0 + e_3)/√2`, `n = (e_0 − e_3)/√2`, `m = (e_1 + i e_2)/√2`, with the
/// Weyl tensor replaced by the Riemann tensor (vacuum).
pub fn psi2_vacuum(riemann: &[Vec<Vec<Vec<CExpr>>>], eta: &FrameMetric) -> CExpr {
    let h = CExpr::real(Expr::frac(1, 2).sqrt());
    let vec4 = |v: [CExpr; 4]| v;
    let l = vec4([h.clone(), CExpr::zero(), CExpr::zero(), h.clone()]);
    let nn = vec4([h.clone(), CExpr::zero(), CExpr::zero(), -h.clone()]);
    let m = vec4([CExpr::zero(), h.clone(), &h * &CExpr::i(), CExpr::zero()]);
    let mb = vec4([CExpr::zero(), h.clone(), -(&h * &CExpr::i()), CExpr::zero()]);
    let mut acc = CExpr::zero();
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let r = &riemann[a][b][cc][d];
                    if r.is_zero() || l[a].is_zero() || m[b].is_zero() || mb[cc].is_zero() || nn[d].is_zero() {
                        continue;
                    }
                    let w = &(&l[a] * &m[b]) * &(&mb[cc] * &nn[d]);
                    acc = acc + (&w * r).scale(&Expr::int(eta.get(a)));
                }
            }
        }
    }
    -acc
}
