//! Type N=2 generalized forms `π + π1 m + π2 m̄ + πTop m m̄`.
//!
//! `m` and `m̄` have degree −1, square to zero and satisfy `dm = dm̄ = 1`.
//! Type N=1 forms are stored in the same representation using the real
//! generator `m¹ = (m + m̄)/2`, so an N=1 form `β + β1 m¹` has
//! `π1 = π2 = β1/2` and `πTop = 0`.

pub mod monomial;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use gf_symexpr::{CExpr, Expr, ZeroPolicy, ZeroVerdict};
use serde_json::{json, Value};

use crate::chart::{Chart, ChartRef};
use crate::error::{CoreError, Result};
use crate::form::OrdForm;
use crate::matrix::{FormMatrix, Graded};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NType {
    N1,
    N2,
}

impl NType {
    fn join(self, other: NType) -> NType {
        if self == NType::N1 && other == NType::N1 {
            NType::N1
        } else {
            NType::N2
        }
    }
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone)]
pub struct GenForm {
    degree: i32,
    pi: OrdForm,
    pi1: OrdForm,
    pi2: OrdForm,
    pitop: OrdForm,
    ntype: NType,
}

pub type GenMatForm = FormMatrix<GenForm>;

/// Components over the real basis `{1, m¹, m², m¹m²}` with `m = m¹ + i m²`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBasis {
    pub degree: i32,
    pub r0: OrdForm,
    pub r1: OrdForm,
    pub r2: OrdForm,
    pub r12: OrdForm,
}

impl GenForm {
    /// Assemble from components; zero components may have any degree.
    pub fn new(degree: i32, pi: OrdForm, pi1: OrdForm, pi2: OrdForm, pitop: OrdForm) -> Result<Self> {
        let chart = pi.chart().clone();
        if degree < -2 || degree > chart.dim() as i32 {
            return Err(CoreError::DegreeOutOfRange(degree));
        }
        let fix = |f: OrdForm, want: i32| -> Result<OrdForm> {
            if !Chart::same(f.chart(), &chart) {
                return Err(CoreError::ChartMismatch);
            }
            if f.is_zero() {
                return Ok(OrdForm::zero(&chart, want));
            }
            if f.degree() != want {
                return Err(CoreError::Verification(format!(
                    "component of degree {} where {} is required",
                    f.degree(),
                    want
                )));
            }
            Ok(f)
        };
        let pi = fix(pi, degree)?;
        let pi1 = fix(pi1, degree + 1)?;
        let pi2 = fix(pi2, degree + 1)?;
        let pitop = fix(pitop, degree + 2)?;
        let ntype = if pi1 == pi2 && pitop.is_zero() {
            NType::N1
        } else {
            NType::N2
        };
        Ok(GenForm {
            degree,
            pi,
            pi1,
            pi2,
            pitop,
            ntype,
        })
    }

    fn raw(degree: i32, pi: OrdForm, pi1: OrdForm, pi2: OrdForm, pitop: OrdForm, ntype: NType) -> Self {
        let chart = pi.chart().clone();
        let norm = |f: OrdForm, want: i32| {
            if f.is_zero() {
                OrdForm::zero(&chart, want)
            } else {
                debug_assert_eq!(f.degree(), want);
                f
            }
        };
        GenForm {
            degree,
            pi: norm(pi, degree),
            pi1: norm(pi1, degree + 1),
            pi2: norm(pi2, degree + 1),
            pitop: norm(pitop, degree + 2),
            ntype,
        }
    }

    pub fn zero(chart: &ChartRef, degree: i32) -> Self {
        let z = OrdForm::zero(chart, 0);
        GenForm::raw(degree, z.clone(), z.clone(), z.clone(), z, NType::N1)
    }

    /// An ordinary form viewed as a generalized form.
    pub fn ordinary(f: &OrdForm) -> Self {
        let z = OrdForm::zero(f.chart(), 0);
        GenForm::raw(f.degree(), f.clone(), z.clone(), z.clone(), z, NType::N1)
    }

    pub fn one(chart: &ChartRef) -> Self {
        GenForm::ordinary(&OrdForm::one(chart))
    }

    pub fn scalar(chart: &ChartRef, c: CExpr) -> Self {
        GenForm::ordinary(&OrdForm::scalar(chart, c))
    }

    /// `β + β1 m¹`, a type N=1 form.
    pub fn n1(beta: &OrdForm, beta1: &OrdForm) -> Self {
        let half = beta1.scale_real(&Expr::frac(1, 2));
        let chart = beta.chart().clone();
        let degree = if beta.is_zero() && !beta1.is_zero() {
            beta1.degree() - 1
        } else {
            beta.degree()
        };
        GenForm::raw(
            degree,
            beta.clone(),
            half.clone(),
            half,
            OrdForm::zero(&chart, 0),
            NType::N1,
        )
    }

    pub fn m(chart: &ChartRef) -> Self {
        let z = OrdForm::zero(chart, 0);
        GenForm::raw(-1, z.clone(), OrdForm::one(chart), z.clone(), z, NType::N2)
    }

    pub fn mbar(chart: &ChartRef) -> Self {
        let z = OrdForm::zero(chart, 0);
        GenForm::raw(-1, z.clone(), z.clone(), OrdForm::one(chart), z, NType::N2)
    }

    /// `m¹ = (m + m̄)/2`, the N=1 generator.
    pub fn m1(chart: &ChartRef) -> Self {
        GenForm::n1(&OrdForm::zero(chart, -1), &OrdForm::one(chart))
    }

    /// `m² = (m − m̄)/(2i)`.
    pub fn m2(chart: &ChartRef) -> Self {
        GenForm::from_real_basis(&RealBasis {
            degree: -1,
            r0: OrdForm::zero(chart, -1),
            r1: OrdForm::zero(chart, 0),
            r2: OrdForm::one(chart),
            r12: OrdForm::zero(chart, 1),
        })
    }

    pub fn mmbar(chart: &ChartRef) -> Self {
        let z = OrdForm::zero(chart, 0);
        GenForm::raw(-2, z.clone(), z.clone(), z, OrdForm::one(chart), NType::N2)
    }

    pub fn chart(&self) -> &ChartRef {
        self.pi.chart()
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn ntype(&self) -> NType {
        self.ntype
    }

    pub fn pi(&self) -> &OrdForm {
        &self.pi
    }

    pub fn pi1(&self) -> &OrdForm {
        &self.pi1
    }

    pub fn pi2(&self) -> &OrdForm {
        &self.pi2
    }

    pub fn pitop(&self) -> &OrdForm {
        &self.pitop
    }

    /// `(β, β1)` of an N=1 form `β + β1 m¹`.
    pub fn n1_parts(&self) -> (OrdForm, OrdForm) {
        (self.pi.clone(), &self.pi1 + &self.pi2)
    }

    /// Satisfies the N=1 constraint `π1 = π2`, `πTop = 0`.
    pub fn is_n1(&self) -> bool {
        self.pi1 == self.pi2 && self.pitop.is_zero()
    }

    pub fn is_ordinary(&self) -> bool {
        self.pi1.is_zero() && self.pi2.is_zero() && self.pitop.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.pi.is_zero() && self.pi1.is_zero() && self.pi2.is_zero() && self.pitop.is_zero()
    }

    /// `π` real, `π2 = conj π1`, `πTop` imaginary.
    pub fn is_real(&self) -> bool {
        self.pi.is_real() && self.pi2 == self.pi1.conj() && self.pitop.is_imaginary()
    }

    pub fn add(&self, other: &GenForm) -> GenForm {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "sum of generalized forms of different degree");
        GenForm::raw(
            self.degree,
            &self.pi + &other.pi,
            &self.pi1 + &other.pi1,
            &self.pi2 + &other.pi2,
            &self.pitop + &other.pitop,
            self.ntype.join(other.ntype),
        )
    }

    pub fn neg(&self) -> GenForm {
        GenForm::raw(
            self.degree,
            -&self.pi,
            -&self.pi1,
            -&self.pi2,
            -&self.pitop,
            self.ntype,
        )
    }

    pub fn scale(&self, k: &CExpr) -> GenForm {
        let nt = if k.is_real() { self.ntype } else { NType::N2 };
        GenForm::raw(
            self.degree,
            self.pi.scale(k),
            self.pi1.scale(k),
            self.pi2.scale(k),
            self.pitop.scale(k),
            nt,
        )
    }

    pub fn scale_int(&self, k: i64) -> GenForm {
        self.scale(&CExpr::int(k))
    }

    /// Product display: for `q = deg(other)`,
    /// `π υ + [π υ1 + (−1)^q π1 υ] m + [π υ2 + (−1)^q π2 υ] m̄
    ///  + [π υT + (−1)^{q+1} π1 υ2 + (−1)^q π2 υ1 + πT υ] m m̄`.
    pub fn try_wedge(&self, other: &GenForm) -> Result<GenForm> {
        if !Chart::same(self.chart(), other.chart()) {
            return Err(CoreError::ChartMismatch);
        }
        let q = other.degree;
        let sq = sign(q);
        let w = |a: &OrdForm, b: &OrdForm| a.wedge(b);
        let pi = w(&self.pi, &other.pi);
        let pi1 = w(&self.pi, &other.pi1) + w(&self.pi1, &other.pi).scale_int(sq);
        let pi2 = w(&self.pi, &other.pi2) + w(&self.pi2, &other.pi).scale_int(sq);
        let pitop = w(&self.pi, &other.pitop)
            + w(&self.pi1, &other.pi2).scale_int(-sq)
            + w(&self.pi2, &other.pi1).scale_int(sq)
            + w(&self.pitop, &other.pi);
        let degree = self.degree + q;
        if degree < -2 {
            return Err(CoreError::DegreeOutOfRange(degree));
        }
        Ok(GenForm::raw(
            degree,
            pi,
            pi1,
            pi2,
            pitop,
            self.ntype.join(other.ntype),
        ))
    }

    pub fn wedge(&self, other: &GenForm) -> GenForm {
        self.try_wedge(other).expect("generalized wedge")
    }

    /// Derivative display:
    /// `dπ + (−1)^{p+1}(π1+π2) + [dπ1 + (−1)^{p+1} πT] m + [dπ2 + (−1)^p πT] m̄ + dπT m m̄`.
    pub fn d(&self) -> GenForm {
        let p = self.degree;
        let s = sign(p + 1);
        GenForm::raw(
            p + 1,
            self.pi.d() + (&self.pi1 + &self.pi2).scale_int(s),
            self.pi1.d() + self.pitop.scale_int(s),
            self.pi2.d() + self.pitop.scale_int(-s),
            self.pitop.d(),
            self.ntype,
        )
    }

    /// Complex conjugate; `m ↔ m̄`, so `m m̄ → m̄ m = −m m̄`.
    pub fn conj(&self) -> GenForm {
        GenForm::raw(
            self.degree,
            self.pi.conj(),
            self.pi2.conj(),
            self.pi1.conj(),
            -self.pitop.conj(),
            self.ntype,
        )
    }

    pub fn to_real_basis(&self) -> RealBasis {
        let half_i = CExpr::imag(Expr::one());
        RealBasis {
            degree: self.degree,
            r0: self.pi.clone(),
            r1: &self.pi1 + &self.pi2,
            r2: (&self.pi1 - &self.pi2).scale(&half_i),
            r12: self.pitop.scale(&CExpr::imag(Expr::int(-2))),
        }
    }

    pub fn from_real_basis(r: &RealBasis) -> GenForm {
        let half = CExpr::frac(1, 2);
        let half_i = CExpr::imag(Expr::frac(1, 2));
        let pi1 = (&r.r1 - &r.r2.scale(&CExpr::i())).scale(&half);
        let pi2 = (&r.r1 + &r.r2.scale(&CExpr::i())).scale(&half);
        let pitop = r.r12.scale(&half_i);
        let ntype = if r.r2.is_zero() && r.r12.is_zero() {
            NType::N1
        } else {
            NType::N2
        };
        GenForm::raw(r.degree, r.r0.clone(), pi1, pi2, pitop, ntype)
    }

    /// Named component verdicts `pi`, `pi1`, `pi2`, `piTop`.
    pub fn component_verdicts(&self, policy: &ZeroPolicy) -> Vec<(&'static str, ZeroVerdict)> {
        vec![
            ("pi", self.pi.verdict(policy)),
            ("pi1", self.pi1.verdict(policy)),
            ("pi2", self.pi2.verdict(policy)),
            ("piTop", self.pitop.verdict(policy)),
        ]
    }

    pub fn verdict(&self, policy: &ZeroPolicy) -> ZeroVerdict {
        ZeroVerdict::all(self.component_verdicts(policy).into_iter().map(|(_, v)| v))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "pi": self.pi.to_json(),
            "pi1": self.pi1.to_json(),
            "pi2": self.pi2.to_json(),
            "piTop": self.pitop.to_json(),
        })
    }
}

/// `c` with `d c = a` for a closed `a`: `c = (−1)^p a m¹`, since
/// `d(a m¹) = (−1)^p a` when `da = 0`.
pub fn potential_of_closed(a: &GenForm, policy: &ZeroPolicy) -> Result<GenForm> {
    let da = a.d();
    for (name, v) in da.component_verdicts(policy) {
        if !v.is_zero_like() {
            let comp = match name {
                "pi" => da.pi(),
                "pi1" => da.pi1(),
                "pi2" => da.pi2(),
                _ => da.pitop(),
            };
            return Err(CoreError::NotClosed {
                component: name.to_string(),
                residual: comp.to_string(),
            });
        }
    }
    if a.degree() == -2 {
        // closed forms of degree −2 vanish
        return Ok(GenForm::zero(a.chart(), -2));
    }
    Ok(a.wedge(&GenForm::m1(a.chart())).scale_int(sign(a.degree())))
}

impl PartialEq for GenForm {
    fn eq(&self, other: &Self) -> bool {
        (self.is_zero() && other.is_zero() && Chart::same(self.chart(), other.chart()))
            || (self.degree == other.degree
                && self.pi == other.pi
                && self.pi1 == other.pi1
                && self.pi2 == other.pi2
                && self.pitop == other.pitop)
    }
}

impl Add<&GenForm> for &GenForm {
    type Output = GenForm;
    fn add(self, rhs: &GenForm) -> GenForm {
        GenForm::add(self, rhs)
    }
}

impl Sub<&GenForm> for &GenForm {
    type Output = GenForm;
    fn sub(self, rhs: &GenForm) -> GenForm {
        GenForm::add(self, &rhs.neg())
    }
}

impl Neg for &GenForm {
    type Output = GenForm;
    fn neg(self) -> GenForm {
        GenForm::neg(self)
    }
}

impl Graded for GenForm {
    fn degree(&self) -> i32 {
        self.degree
    }
    fn zero_like(&self, degree: i32) -> Self {
        GenForm::zero(self.chart(), degree)
    }
    fn one_like(&self) -> Self {
        GenForm::one(self.chart())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn wedge(&self, other: &Self) -> Self {
        GenForm::wedge(self, other)
    }
    fn ext_d(&self) -> Self {
        self.d()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn scaled(&self, k: &CExpr) -> Self {
        self.scale(k)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn zero_verdict(&self, policy: &ZeroPolicy) -> ZeroVerdict {
        self.verdict(policy)
    }
}

impl fmt::Display for GenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.pi.is_zero() {
            parts.push(format!("{}", self.pi));
        }
        if !self.pi1.is_zero() {
            parts.push(format!("[{}] m", self.pi1));
        }
        if !self.pi2.is_zero() {
            parts.push(format!("[{}] mbar", self.pi2));
        }
        if !self.pitop.is_zero() {
            parts.push(format!("[{}] m mbar", self.pitop));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for GenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenForm[{}, {:?}]({self})", self.degree, self.ntype)
    }
}

/// Ordinary matrix lifted entrywise.
pub fn lift_matrix(m: &FormMatrix<OrdForm>) -> GenMatForm {
    m.map(GenForm::ordinary)
}

/// `a m` for each entry (right multiplication by `m`).
pub fn times_m(m: &FormMatrix<OrdForm>) -> GenMatForm {
    let chart = m.get(0, 0).chart().clone();
    let gm = GenForm::m(&chart);
    m.map(|x| GenForm::ordinary(x).wedge(&gm))
}

/// `a m̄` for each entry.
pub fn times_mbar(m: &FormMatrix<OrdForm>) -> GenMatForm {
    let chart = m.get(0, 0).chart().clone();
    let gm = GenForm::mbar(&chart);
    m.map(|x| GenForm::ordinary(x).wedge(&gm))
}

/// `a m¹` for each entry.
pub fn times_m1(m: &FormMatrix<OrdForm>) -> GenMatForm {
    let chart = m.get(0, 0).chart().clone();
    let gm = GenForm::m1(&chart);
    m.map(|x| GenForm::ordinary(x).wedge(&gm))
}

/// `a m m̄` for each entry.
pub fn times_mmbar(m: &FormMatrix<OrdForm>) -> GenMatForm {
    let chart = m.get(0, 0).chart().clone();
    let gm = GenForm::mmbar(&chart);
    m.map(|x| GenForm::ordinary(x).wedge(&gm))
}

/// Matrices of the four slots of every entry.
pub struct MatrixParts {
    pub pi: FormMatrix<OrdForm>,
    pub pi1: FormMatrix<OrdForm>,
    pub pi2: FormMatrix<OrdForm>,
    pub pitop: FormMatrix<OrdForm>,
}

pub fn matrix_parts(m: &GenMatForm) -> MatrixParts {
    MatrixParts {
        pi: m.map(|x| x.pi().clone()),
        pi1: m.map(|x| x.pi1().clone()),
        pi2: m.map(|x| x.pi2().clone()),
        pitop: m.map(|x| x.pitop().clone()),
    }
}
