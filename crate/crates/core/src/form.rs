//! Ordinary complex-valued differential forms on a chart.
//!
//! A term is keyed by the bitmask of its strictly increasing coordinate
//! indices, so `dx^i ∧ dx^j` with `i < j` is mask `1<<i | 1<<j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use gf_symexpr::{all_zero, CExpr, Expr, ZeroPolicy, ZeroVerdict};
use serde_json::{json, Value};

use crate::chart::{Chart, ChartRef};
use crate::error::{CoreError, Result};

pub type Mask = u8;

#[derive(Clone)]
pub struct OrdForm {
    chart: ChartRef,
    degree: i32,
    terms: BTreeMap<Mask, CExpr>,
}

/// Sign of `dx^A ∧ dx^B` relative to the sorted product (0 if they overlap).
pub fn wedge_sign(a: Mask, b: Mask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mask_indices(mask: Mask) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

impl OrdForm {
    pub fn zero(chart: &ChartRef, degree: i32) -> Self {
        OrdForm {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: &ChartRef, c: CExpr) -> Self {
        let mut f = OrdForm::zero(chart, 0);
        f.insert(0, c);
        f
    }

    pub fn real_scalar(chart: &ChartRef, e: Expr) -> Self {
        OrdForm::scalar(chart, CExpr::real(e))
    }

    pub fn one(chart: &ChartRef) -> Self {
        OrdForm::scalar(chart, CExpr::one())
    }

    /// `dx^i` (0-based coordinate index).
    pub fn dx(chart: &ChartRef, i: usize) -> Self {
        assert!(i < chart.dim(), "coordinate index out of range");
        let mut f = OrdForm::zero(chart, 1);
        f.insert(1 << i, CExpr::one());
        f
    }

    /// `coeff dx^{i1} ∧ ... ∧ dx^{ip}` for arbitrary index order.
    pub fn monomial(chart: &ChartRef, indices: &[usize], coeff: CExpr) -> Self {
        let mut f = OrdForm::one(chart).scale(&coeff);
        for &i in indices {
            f = f.wedge(&OrdForm::dx(chart, i));
        }
        f
    }

    pub fn from_terms(chart: &ChartRef, degree: i32, terms: impl IntoIterator<Item = (Mask, CExpr)>) -> Self {
        let mut f = OrdForm::zero(chart, degree);
        for (m, c) in terms {
            assert_eq!(m.count_ones() as i32, degree, "term degree mismatch");
            let sum = f.coeff(m) + c;
            f.insert(m, sum);
        }
        f
    }

    fn insert(&mut self, mask: Mask, c: CExpr) {
        if self.degree < 0 || self.degree as usize > self.chart.dim() {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, c);
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn coeff(&self, mask: Mask) -> CExpr {
        self.terms.get(&mask).cloned().unwrap_or_else(CExpr::zero)
    }

    /// Coefficient of `dx^{i1} ∧ ... ∧ dx^{ip}` for increasing 0-based indices.
    pub fn component(&self, indices: &[usize]) -> CExpr {
        let mask = indices.iter().fold(0u8, |m, i| m | (1 << i));
        self.coeff(mask)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &CExpr)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    pub fn is_imaginary(&self) -> bool {
        self.terms.values().all(|c| c.is_imaginary())
    }

    /// Zero-degree form's value.
    pub fn scalar_value(&self) -> CExpr {
        assert_eq!(self.degree, 0, "scalar_value of a {}-form", self.degree);
        self.coeff(0)
    }

    pub fn map(&self, f: impl Fn(&CExpr) -> CExpr) -> Self {
        let mut out = OrdForm::zero(&self.chart, self.degree);
        for (m, c) in self.terms.iter() {
            out.insert(*m, f(c));
        }
        out
    }

    pub fn scale(&self, k: &CExpr) -> Self {
        if k.is_zero() {
            return OrdForm::zero(&self.chart, self.degree);
        }
        self.map(|c| c * k)
    }

    pub fn scale_real(&self, k: &Expr) -> Self {
        self.map(|c| c.scale(k))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        match k {
            1 => self.clone(),
            -1 => -self,
            _ => self.scale_real(&Expr::int(k)),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn re(&self) -> Self {
        self.map(|c| CExpr::real(c.re.clone()))
    }

    pub fn im(&self) -> Self {
        self.map(|c| CExpr::real(c.im.clone()))
    }

    pub fn mul_i(&self) -> Self {
        self.map(|c| c.mul_i())
    }

    pub fn try_wedge(&self, other: &OrdForm) -> Result<OrdForm> {
        if !Chart::same(&self.chart, &other.chart) {
            return Err(CoreError::ChartMismatch);
        }
        let mut out = OrdForm::zero(&self.chart, self.degree + other.degree);
        if out.degree < 0 || out.degree as usize > self.chart.dim() {
            return Ok(out);
        }
        let mut acc: BTreeMap<Mask, CExpr> = BTreeMap::new();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                let s = wedge_sign(*ma, *mb);
                if s == 0 {
                    continue;
                }
                let p = ca * cb;
                let p = if s < 0 { -p } else { p };
                let e = acc.entry(ma | mb).or_insert_with(CExpr::zero);
                *e = &*e + &p;
            }
        }
        for (m, c) in acc {
            out.insert(m, c);
        }
        Ok(out)
    }

    /// Exterior product. Panics on a chart mismatch; see [`OrdForm::try_wedge`].
    pub fn wedge(&self, other: &OrdForm) -> OrdForm {
        self.try_wedge(other).expect("wedge of forms on different charts")
    }

    /// Exterior derivative.
    pub fn d(&self) -> OrdForm {
        let n = self.chart.dim();
        let mut out = OrdForm::zero(&self.chart, self.degree + 1);
        if out.degree < 0 || out.degree as usize > n {
            return out;
        }
        let mut acc: BTreeMap<Mask, CExpr> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            for k in 0..n {
                let bit = 1u8 << k;
                if m & bit != 0 {
                    continue;
                }
                let dc = c.diff(self.chart.coord(k));
                if dc.is_zero() {
                    continue;
                }
                let below = (m & (bit - 1)).count_ones();
                let dc = if below % 2 == 1 { -dc } else { dc };
                let e = acc.entry(m | bit).or_insert_with(CExpr::zero);
                *e = &*e + &dc;
            }
        }
        for (m, c) in acc {
            out.insert(m, c);
        }
        out
    }

    /// Zero verdict over every real and imaginary coefficient.
    pub fn verdict(&self, policy: &ZeroPolicy) -> ZeroVerdict {
        let exprs: Vec<Expr> = self
            .terms
            .values()
            .flat_map(|c| [c.re.clone(), c.im.clone()])
            .collect();
        all_zero(&exprs, policy, self.chart.domain())
    }

    /// Largest coefficient modulus at a point.
    pub fn max_abs_at(&self, point: &std::collections::HashMap<String, f64>) -> Option<f64> {
        let mut m: f64 = 0.0;
        for c in self.terms.values() {
            m = m.max(c.eval(point).ok()?.norm());
        }
        Some(m)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "indices": mask_indices(*m).iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "coeffRe": c.re.to_string(),
                    "coeffIm": c.im.to_string(),
                })
            })
            .collect();
        json!({ "degree": self.degree, "terms": terms })
    }

    fn combine(&self, other: &OrdForm, negate: bool) -> OrdForm {
        assert!(
            Chart::same(&self.chart, &other.chart),
            "sum of forms on different charts"
        );
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() && self.degree != other.degree {
            return if negate { -other } else { other.clone() };
        }
        assert_eq!(self.degree, other.degree, "sum of forms of different degree");
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            let sum = if negate {
                out.coeff(*m) - c
            } else {
                out.coeff(*m) + c
            };
            out.insert(*m, sum);
        }
        out
    }
}

impl PartialEq for OrdForm {
    fn eq(&self, other: &Self) -> bool {
        Chart::same(&self.chart, &other.chart)
            && (self.terms.is_empty() && other.terms.is_empty()
                || self.degree == other.degree && self.terms == other.terms)
    }
}

impl Add<&OrdForm> for &OrdForm {
    type Output = OrdForm;
    fn add(self, rhs: &OrdForm) -> OrdForm {
        self.combine(rhs, false)
    }
}

impl Add<OrdForm> for OrdForm {
    type Output = OrdForm;
    fn add(self, rhs: OrdForm) -> OrdForm {
        self.combine(&rhs, false)
    }
}

impl Sub<&OrdForm> for &OrdForm {
    type Output = OrdForm;
    fn sub(self, rhs: &OrdForm) -> OrdForm {
        self.combine(rhs, true)
    }
}

impl Sub<OrdForm> for OrdForm {
    type Output = OrdForm;
    fn sub(self, rhs: OrdForm) -> OrdForm {
        self.combine(&rhs, true)
    }
}

impl Neg for &OrdForm {
    type Output = OrdForm;
    fn neg(self) -> OrdForm {
        self.map(|c| -c)
    }
}

impl Neg for OrdForm {
    type Output = OrdForm;
    fn neg(self) -> OrdForm {
        -&self
    }
}

impl fmt::Display for OrdForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let basis: Vec<String> = mask_indices(*m)
                    .iter()
                    .map(|i| format!("d{}", self.chart.coord(*i)))
                    .collect();
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", basis.join("^"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for OrdForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrdForm[{}]({self})", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> ChartRef {
        Chart::new(&["r", "th", "ph"]).unwrap()
    }

    #[test]
    fn sign_rule() {
        let c = chart();
        let (d1, d2) = (OrdForm::dx(&c, 0), OrdForm::dx(&c, 1));
        assert!(d1.wedge(&d1).is_zero());
        assert_eq!(d1.wedge(&d2), -d2.wedge(&d1));
        assert_eq!(wedge_sign(0b100, 0b011), 1);
        assert_eq!(wedge_sign(0b010, 0b001), -1);
    }

    #[test]
    fn bilinearity() {
        let c = chart();
        let r = Expr::symbol("r");
        let a = OrdForm::dx(&c, 0).scale_real(&r);
        let b = OrdForm::dx(&c, 1).scale_real(&(&r * &r));
        let expected = OrdForm::monomial(&c, &[0, 1], CExpr::real(r.powi(3)));
        assert_eq!(a.wedge(&b), expected);
    }

    #[test]
    fn derivative_examples() {
        let c = chart();
        let r = Expr::symbol("r");
        let f = OrdForm::real_scalar(&c, &r * &r);
        assert_eq!(f.d(), OrdForm::dx(&c, 0).scale_real(&(Expr::int(2) * &r)));
        let g = OrdForm::dx(&c, 1).scale_real(&(&r * &r));
        assert_eq!(
            g.d(),
            OrdForm::monomial(&c, &[0, 1], CExpr::real(Expr::int(2) * &r))
        );
        let h = OrdForm::real_scalar(&c, (&r * Expr::symbol("th")).sin());
        assert!(h.d().d().is_zero());
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = OrdForm::dx(&chart(), 0);
        let b = OrdForm::dx(&Chart::new(&["t", "x"]).unwrap(), 0);
        assert_eq!(a.try_wedge(&b), Err(CoreError::ChartMismatch));
    }

    #[test]
    fn out_of_range_degree_is_zero() {
        let c = chart();
        let top = OrdForm::monomial(&c, &[0, 1, 2], CExpr::one());
        assert!(top.wedge(&OrdForm::dx(&c, 0)).is_zero());
        assert!(top.d().is_zero());
    }
}
