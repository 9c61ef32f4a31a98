//! Orthonormal coframes, the Levi-Civita connection and its curvature.

use std::fmt;

use gf_symexpr::{CExpr, Expr, ZeroPolicy, ZeroVerdict};

use crate::chart::ChartRef;
use crate::error::{CoreError, Result};
use crate::form::{Mask, OrdForm};
use crate::matrix::{invert_scalar, Algebra, FormMatrix, MatOrdForm};

/// Constant diagonal frame metric with entries ±1.
#[derive(Clone, PartialEq, Eq)]
pub struct FrameMetric {
    diag: Vec<i8>,
}

impl FrameMetric {
    pub fn new(diag: Vec<i8>) -> Result<Self> {
        if diag.iter().any(|d| *d != 1 && *d != -1) {
            return Err(CoreError::Metric("frame metric entries must be +1 or -1".into()));
        }
        Ok(FrameMetric { diag })
    }

    /// `"+---"` style.
    pub fn parse(sig: &str) -> Result<Self> {
        let diag = sig
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(CoreError::Metric(format!("bad signature character `{c}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        if diag.is_empty() {
            return Err(CoreError::Metric("empty signature".into()));
        }
        FrameMetric::new(diag)
    }

    pub fn euclidean(n: usize) -> Self {
        FrameMetric { diag: vec![1; n] }
    }

    pub fn lorentzian() -> Self {
        FrameMetric {
            diag: vec![1, -1, -1, -1],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, a: usize) -> i64 {
        self.diag[a] as i64
    }

    pub fn signature(&self) -> (usize, usize) {
        let p = self.diag.iter().filter(|d| **d > 0).count();
        (p, self.diag.len() - p)
    }
}

impl fmt::Display for FrameMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.diag {
            f.write_str(if *d > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for FrameMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FrameMetric({self})")
    }
}

/// Matrix of 0-forms from scalar entries.
pub fn scalar_matrix(chart: &ChartRef, entries: &[Vec<CExpr>]) -> MatOrdForm {
    let n = entries.len();
    let m = entries[0].len();
    FormMatrix::from_fn(n, m, |i, j| OrdForm::scalar(chart, entries[i][j].clone()))
}

/// Basis of one-forms with its coefficient matrix `E^a_μ` and inverse.
#[derive(Clone, Debug)]
pub struct Coframe {
    forms: Vec<OrdForm>,
    matrix: Vec<Vec<CExpr>>,
    inverse: Vec<Vec<CExpr>>,
}

impl Coframe {
    pub fn new(forms: Vec<OrdForm>) -> Result<Self> {
        let chart = forms
            .first()
            .ok_or_else(|| CoreError::DegenerateCoframe("empty coframe".into()))?
            .chart()
            .clone();
        let n = chart.dim();
        if forms.len() != n {
            return Err(CoreError::DegenerateCoframe(format!(
                "{} one-forms on a {n}-dimensional chart",
                forms.len()
            )));
        }
        for (a, f) in forms.iter().enumerate() {
            if f.degree() != 1 {
                return Err(CoreError::DegenerateCoframe(format!(
                    "entry {} has degree {}",
                    a + 1,
                    f.degree()
                )));
            }
        }
        let matrix: Vec<Vec<CExpr>> = forms
            .iter()
            .map(|f| (0..n).map(|mu| f.coeff(1 << mu)).collect())
            .collect();
        let inverse = invert_scalar(&matrix)?;
        Ok(Coframe {
            forms,
            matrix,
            inverse,
        })
    }

    pub fn chart(&self) -> &ChartRef {
        self.forms[0].chart()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[OrdForm] {
        &self.forms
    }

    pub fn get(&self, a: usize) -> &OrdForm {
        &self.forms[a]
    }

    /// `E^a_μ` with `θ^a = E^a_μ dx^μ`.
    pub fn matrix(&self) -> &[Vec<CExpr>] {
        &self.matrix
    }

    /// `(E^{-1})^μ_a`.
    pub fn inverse(&self) -> &[Vec<CExpr>] {
        &self.inverse
    }

    pub fn column(&self) -> MatOrdForm {
        FormMatrix::column(self.forms.clone())
    }

    /// Components of `f` in the coframe basis. The result lives on the same
    /// chart but its basis slot `b` stands for `θ^b` instead of `dx^b`.
    pub fn expand(&self, f: &OrdForm) -> OrdForm {
        let chart = self.chart();
        let n = chart.dim();
        let images: Vec<OrdForm> = (0..n)
            .map(|mu| {
                OrdForm::from_terms(chart, 1, (0..n).map(|b| (1u8 << b, self.inverse[mu][b].clone())))
            })
            .collect();
        let mut out = OrdForm::zero(chart, f.degree());
        for (mask, c) in f.terms() {
            let mut t = OrdForm::scalar(chart, c.clone());
            for (mu, img) in images.iter().enumerate() {
                if mask & (1 << mu) != 0 {
                    t = t.wedge(img);
                }
            }
            out = out + t;
        }
        out
    }

    /// Inverse of [`Coframe::expand`].
    pub fn assemble(&self, frame_components: &OrdForm) -> OrdForm {
        let chart = self.chart();
        let mut out = OrdForm::zero(chart, frame_components.degree());
        for (mask, c) in frame_components.terms() {
            let mut t = OrdForm::scalar(chart, c.clone());
            for (b, theta) in self.forms.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    t = t.wedge(theta);
                }
            }
            out = out + t;
        }
        out
    }

    /// Frame component `X_{b1..bp}` of a form given as sorted frame indices.
    pub fn frame_component(&self, f: &OrdForm, indices: &[usize]) -> CExpr {
        let mask: Mask = indices.iter().fold(0, |m, i| m | (1 << i));
        self.expand(f).coeff(mask)
    }
}

/// `A_ab + A_ba` after lowering with `η`.
pub fn so_residual(a: &MatOrdForm, eta: &FrameMetric) -> MatOrdForm {
    let n = a.rows();
    FormMatrix::from_fn(n, n, |i, j| {
        a.get(i, j).scale_int(eta.get(i)) + a.get(j, i).scale_int(eta.get(j))
    })
}

/// `ω_{abc} = ½(G_abc + G_bca − G_cab)` from `dθ^a = Σ_{b<c} G^a_bc θ^b θ^c`.
pub fn levi_civita(coframe: &Coframe, eta: &FrameMetric) -> Result<MatOrdForm> {
    let n = coframe.len();
    if eta.dim() != n {
        return Err(CoreError::Signature {
            expected: format!("{n} entries"),
            found: eta.to_string(),
        });
    }
    let g: Vec<OrdForm> = coframe.forms().iter().map(|t| coframe.expand(&t.d())).collect();
    // lowered structure functions G_abc, antisymmetric in bc
    let big_g = |a: usize, b: usize, c: usize| -> CExpr {
        if b == c {
            return CExpr::zero();
        }
        let mask: Mask = (1 << b) | (1 << c);
        let v = g[a].coeff(mask);
        let v = if b < c { v } else { -v };
        if eta.get(a) < 0 {
            -v
        } else {
            v
        }
    };
    let chart = coframe.chart();
    let half = Expr::frac(1, 2);
    let omega = FormMatrix::from_fn(n, n, |a, b| {
        let mut comps = OrdForm::zero(chart, 1);
        for c in 0..n {
            let w = (big_g(a, b, c) + big_g(b, c, a) - big_g(c, a, b)).scale(&half);
            let w = if eta.get(a) < 0 { -w } else { w };
            if !w.is_zero() {
                comps = comps + OrdForm::from_terms(chart, 1, [(1u8 << c, w)]);
            }
        }
        coframe.assemble(&comps)
    })
    .with_tag(Algebra::So);
    let torsion = first_structure_residual(coframe, &omega);
    if !torsion.is_zero() {
        return Err(CoreError::Verification(format!(
            "Levi-Civita solve left torsion {:?}",
            torsion
        )));
    }
    if !so_residual(&omega, eta).is_zero() {
        return Err(CoreError::Verification(
            "Levi-Civita solve is not metric".into(),
        ));
    }
    Ok(omega)
}

/// `dθ + ω∧θ` as a column.
pub fn first_structure_residual(coframe: &Coframe, omega: &MatOrdForm) -> MatOrdForm {
    let theta = coframe.column();
    theta.d().add(&omega.mul(&theta))
}

/// `Ω = dω + ω∧ω`.
pub fn curvature(omega: &MatOrdForm) -> MatOrdForm {
    let mut out = omega.d().add(&omega.mul(omega));
    out.tag = omega.tag;
    out
}

/// `D X = dX + ω∧X − (−1)^p X∧ω` for an adjoint-valued p-form.
pub fn covariant_d_adjoint(omega: &MatOrdForm, x: &MatOrdForm) -> MatOrdForm {
    let xw = x.mul(omega);
    let xw = if x.degree() % 2 == 0 { xw } else { xw.neg() };
    x.d().add(&omega.mul(x)).sub(&xw)
}

/// Verdicts of the two Bianchi identities `Ω∧θ = 0` and `DΩ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BianchiVerdicts {
    pub first: ZeroVerdict,
    pub second: ZeroVerdict,
}

pub fn check_bianchi(
    omega: &MatOrdForm,
    curv: &MatOrdForm,
    coframe: &Coframe,
    policy: &ZeroPolicy,
) -> BianchiVerdicts {
    let first = curv.mul(&coframe.column());
    let second = covariant_d_adjoint(omega, curv);
    BianchiVerdicts {
        first: first.verdict(policy),
        second: second.verdict(policy),
    }
}

/// `η^{-1} Lᵀ η`, the inverse of an element of the structure group.
pub fn group_inverse(l: &MatOrdForm, eta: &FrameMetric) -> MatOrdForm {
    let n = l.rows();
    FormMatrix::from_fn(n, n, |a, b| l.get(b, a).scale_int(eta.get(a) * eta.get(b)))
}

/// `L^a_c L^b_d η_ab − η_cd`.
pub fn group_residual(l: &MatOrdForm, eta: &FrameMetric) -> MatOrdForm {
    let n = l.rows();
    FormMatrix::from_fn(n, n, |c, d| {
        let mut acc = if c == d {
            OrdForm::scalar(l.get(0, 0).chart(), CExpr::int(-eta.get(c)))
        } else {
            l.get(0, 0).zero_like_scalar()
        };
        for a in 0..n {
            acc = acc + l.get(a, c).wedge(l.get(a, d)).scale_int(eta.get(a));
        }
        acc
    })
}

impl OrdForm {
    fn zero_like_scalar(&self) -> OrdForm {
        OrdForm::zero(self.chart(), 0)
    }
}

pub fn check_in_group(l: &MatOrdForm, eta: &FrameMetric, policy: &ZeroPolicy) -> Result<()> {
    let res = group_residual(l, eta);
    for ((i, j), v) in res.entry_verdicts(policy) {
        if !v.is_zero_like() {
            return Err(CoreError::NotInGroup {
                row: i + 1,
                col: j + 1,
                residual: res.get(i, j).to_string(),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct GaugeTriple {
    pub theta: MatOrdForm,
    pub omega: MatOrdForm,
    pub curvature: MatOrdForm,
}

/// `θ → L⁻¹θ`, `ω → L⁻¹dL + L⁻¹ωL`, `Ω → L⁻¹ΩL`.
pub fn gauge_transform(
    theta: &MatOrdForm,
    omega: &MatOrdForm,
    curv: &MatOrdForm,
    l: &MatOrdForm,
    eta: &FrameMetric,
    policy: &ZeroPolicy,
) -> Result<GaugeTriple> {
    check_in_group(l, eta, policy)?;
    let linv = group_inverse(l, eta);
    let theta1 = linv.mul(theta);
    let omega1 = linv.mul(&l.d()).add(&linv.mul(omega).mul(l)).with_tag(omega.tag);
    let curv1 = linv.mul(curv).mul(l).with_tag(curv.tag);
    let check = curvature(&omega1).sub(&curv1);
    if !check.verdict(policy).is_zero_like() {
        return Err(CoreError::Verification(
            "transformed curvature differs from curvature of transformed connection".into(),
        ));
    }
    Ok(GaugeTriple {
        theta: theta1,
        omega: omega1,
        curvature: curv1,
    })
}

/// Coframe, metric, Levi-Civita connection and curvature together.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub coframe: Coframe,
    pub eta: FrameMetric,
    pub omega: MatOrdForm,
    pub curvature: MatOrdForm,
}

impl Geometry {
    pub fn new(coframe: Coframe, eta: FrameMetric) -> Result<Self> {
        let omega = levi_civita(&coframe, &eta)?;
        let curv = curvature(&omega);
        Ok(Geometry {
            coframe,
            eta,
            omega,
            curvature: curv,
        })
    }

    pub fn chart(&self) -> &ChartRef {
        self.coframe.chart()
    }

    pub fn theta(&self) -> MatOrdForm {
        self.coframe.column()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn sphere() -> (ChartRef, Coframe) {
        let c = Chart::new(&["th", "ph"]).unwrap();
        let th = Expr::symbol("th");
        let cf = Coframe::new(vec![
            OrdForm::dx(&c, 0),
            OrdForm::dx(&c, 1).scale_real(&th.sin()),
        ])
        .unwrap();
        (c, cf)
    }

    #[test]
    fn sphere_connection_and_curvature() {
        let (c, cf) = sphere();
        let eta = FrameMetric::euclidean(2);
        let omega = levi_civita(&cf, &eta).unwrap();
        let th = Expr::symbol("th");
        assert_eq!(omega.get(0, 1), &OrdForm::dx(&c, 1).scale_real(&-th.cos()));
        let curv = curvature(&omega);
        // Gauss curvature 1: Ω¹₂ = θ¹∧θ²
        assert_eq!(curv.get(0, 1), &cf.get(0).wedge(cf.get(1)));
    }

    #[test]
    fn degenerate_coframe_is_rejected() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let dx = OrdForm::dx(&c, 0);
        assert!(matches!(
            Coframe::new(vec![dx.clone(), dx.scale_int(2)]),
            Err(CoreError::DegenerateCoframe(_))
        ));
    }

    #[test]
    fn expansion_round_trip() {
        let (c, cf) = sphere();
        let f = OrdForm::dx(&c, 0).wedge(&OrdForm::dx(&c, 1));
        let e = cf.expand(&f);
        assert_eq!(cf.assemble(&e), f);
        assert_eq!(
            e.coeff(0b11),
            CExpr::real(Expr::one() / Expr::symbol("th").sin())
        );
    }

    #[test]
    fn non_group_element_is_rejected() {
        let (c, cf) = sphere();
        let eta = FrameMetric::euclidean(2);
        let omega = levi_civita(&cf, &eta).unwrap();
        let curv = curvature(&omega);
        let l = scalar_matrix(
            &c,
            &[vec![CExpr::int(2), CExpr::zero()], vec![CExpr::zero(), CExpr::one()]],
        );
        let err = gauge_transform(&cf.column(), &omega, &curv, &l, &eta, &ZeroPolicy::SymbolicOnly)
            .unwrap_err();
        assert!(matches!(err, CoreError::NotInGroup { row: 1, col: 1, .. }));
    }
}
