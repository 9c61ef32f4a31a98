//! Brute-force generalized forms as sums of monomials `f dx^I m^a m̄^b`.
//!
//! This path shares no sign logic with the component displays in the parent
//! module: products reorder generator strings by counting transpositions of
//! odd elements, and `d` applies the graded Leibniz rule factor by factor
//! with `dm = dm̄ = 1`. It exists to check those displays.

use std::collections::BTreeMap;

use gf_symexpr::CExpr;

use super::GenForm;
use crate::chart::ChartRef;
use crate::form::OrdForm;

/// One generator of the algebra; order of the variants is the normal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Gen {
    Dx(usize),
    M,
    MBar,
}

/// Normal-ordered, repetition-free generator string.
type Word = Vec<Gen>;

#[derive(Clone, Debug)]
pub struct MonomialForm {
    chart: ChartRef,
    terms: BTreeMap<Word, CExpr>,
}

/// Sort a word of anticommuting generators. `None` if a generator repeats.
fn normal_order(word: &[Gen]) -> Option<(Word, bool)> {
    let mut w = word.to_vec();
    let mut negative = false;
    // bubble sort, every adjacent swap of two odd elements flips the sign
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                negative = !negative;
            }
        }
    }
    for pair in w.windows(2) {
        if pair[0] == pair[1] {
            return None;
        }
    }
    Some((w, negative))
}

impl MonomialForm {
    pub fn zero(chart: &ChartRef) -> Self {
        MonomialForm {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn push(&mut self, word: &[Gen], c: CExpr) {
        if c.is_zero() {
            return;
        }
        let Some((w, negative)) = normal_order(word) else {
            return;
        };
        let c = if negative { -c } else { c };
        let sum = self.terms.get(&w).cloned().unwrap_or_else(CExpr::zero) + c;
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    fn slot_words(f: &OrdForm, tail: &[Gen], out: &mut MonomialForm) {
        for (mask, c) in f.terms() {
            let mut w: Word = (0..8).filter(|i| mask & (1 << i) != 0).map(Gen::Dx).collect();
            w.extend_from_slice(tail);
            out.push(&w, c.clone());
        }
    }

    pub fn from_genform(g: &GenForm) -> Self {
        let mut out = MonomialForm::zero(g.chart());
        Self::slot_words(g.pi(), &[], &mut out);
        Self::slot_words(g.pi1(), &[Gen::M], &mut out);
        Self::slot_words(g.pi2(), &[Gen::MBar], &mut out);
        Self::slot_words(g.pitop(), &[Gen::M, Gen::MBar], &mut out);
        out
    }

    /// Back to components, given the nominal degree.
    pub fn to_genform(&self, degree: i32) -> GenForm {
        let chart = &self.chart;
        if degree > chart.dim() as i32 {
            // no word exceeds degree n
            assert!(self.terms.is_empty(), "monomial form above top degree");
            return GenForm::zero(chart, degree);
        }
        let mut slots: [Vec<(u8, CExpr)>; 4] = Default::default();
        for (w, c) in self.terms.iter() {
            let mut mask = 0u8;
            let (mut has_m, mut has_mbar) = (false, false);
            for g in w {
                match g {
                    Gen::Dx(i) => mask |= 1 << i,
                    Gen::M => has_m = true,
                    Gen::MBar => has_mbar = true,
                }
            }
            let slot = match (has_m, has_mbar) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            };
            slots[slot].push((mask, c.clone()));
        }
        let build = |k: usize, deg: i32| OrdForm::from_terms(chart, deg, slots[k].clone());
        GenForm::new(
            degree,
            build(0, degree),
            build(1, degree + 1),
            build(2, degree + 1),
            build(3, degree + 2),
        )
        .expect("monomial form components")
    }

    pub fn mul(&self, other: &MonomialForm) -> MonomialForm {
        let mut out = MonomialForm::zero(&self.chart);
        for (wa, ca) in self.terms.iter() {
            for (wb, cb) in other.terms.iter() {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.push(&w, ca * cb);
            }
        }
        out
    }

    /// `d(f g1 ... gk) = df g1...gk + f Σ_j (−1)^j g1..d(gj)..gk`
    /// with `d dx = 0` and `d m = d m̄ = 1`.
    pub fn d(&self) -> MonomialForm {
        let mut out = MonomialForm::zero(&self.chart);
        let n = self.chart.dim();
        for (w, c) in self.terms.iter() {
            for k in 0..n {
                let dc = c.diff(self.chart.coord(k));
                let mut word = vec![Gen::Dx(k)];
                word.extend_from_slice(w);
                out.push(&word, dc);
            }
            for (j, g) in w.iter().enumerate() {
                if matches!(g, Gen::M | Gen::MBar) {
                    let mut word = w.clone();
                    word.remove(j);
                    let c = if j % 2 == 1 { -c.clone() } else { c.clone() };
                    out.push(&word, c);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
