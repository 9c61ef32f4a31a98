//! Seeded random forms, connections and group elements for property checks.

use gf_symexpr::{CExpr, Expr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::ChartRef;
use crate::form::{Mask, OrdForm};
use crate::frame::FrameMetric;
use crate::genform::GenForm;
use crate::matrix::{FormMatrix, MatOrdForm};

pub struct FormSampler {
    rng: ChaCha8Rng,
    chart: ChartRef,
    /// Terms per random polynomial.
    pub max_terms: usize,
    /// Largest exponent per coordinate.
    pub max_power: u32,
    /// Nonzero basis elements per random form.
    pub max_components: usize,
    pub complex: bool,
}

impl FormSampler {
    pub fn new(chart: &ChartRef, seed: u64) -> Self {
        FormSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            chart: chart.clone(),
            max_terms: 2,
            max_power: 2,
            max_components: 2,
            complex: true,
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn nonzero_int(&mut self) -> i64 {
        let v = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            -v
        } else {
            v
        }
    }

    /// Random polynomial in the chart coordinates with small integer coefficients.
    pub fn poly(&mut self) -> Expr {
        let n = self.chart.dim();
        let terms = self.rng.gen_range(1..=self.max_terms);
        let mut acc = Expr::zero();
        for _ in 0..terms {
            let mut t = Expr::int(self.nonzero_int());
            for i in 0..n {
                let e = self.rng.gen_range(0..=self.max_power);
                if e > 0 && self.rng.gen_bool(0.5) {
                    t = t * self.chart.coord_expr(i).powi(e as i32);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn coeff(&mut self) -> CExpr {
        let re = self.poly();
        if self.complex && self.rng.gen_bool(0.5) {
            let im = self.poly();
            CExpr::new(re, im)
        } else {
            CExpr::real(re)
        }
    }

    pub fn real_coeff(&mut self) -> CExpr {
        CExpr::real(self.poly())
    }

    fn masks_of_degree(&self, p: i32) -> Vec<Mask> {
        let n = self.chart.dim();
        (0u16..(1 << n))
            .map(|m| m as Mask)
            .filter(|m| m.count_ones() as i32 == p)
            .collect()
    }

    fn form_with(&mut self, degree: i32, real: bool) -> OrdForm {
        if degree < 0 || degree as usize > self.chart.dim() {
            return OrdForm::zero(&self.chart, degree);
        }
        let mut masks = self.masks_of_degree(degree);
        masks.shuffle(&mut self.rng);
        let k = self.rng.gen_range(1..=self.max_components).min(masks.len());
        let mut terms = Vec::new();
        for m in masks.into_iter().take(k) {
            let c = if real { self.real_coeff() } else { self.coeff() };
            terms.push((m, c));
        }
        OrdForm::from_terms(&self.chart, degree, terms)
    }

    pub fn ord_form(&mut self, degree: i32) -> OrdForm {
        self.form_with(degree, false)
    }

    pub fn real_form(&mut self, degree: i32) -> OrdForm {
        self.form_with(degree, true)
    }

    /// Random type N=2 generalized form of the given degree.
    pub fn gen_form(&mut self, degree: i32) -> GenForm {
        let pi = self.ord_form(degree);
        let pi1 = self.ord_form(degree + 1);
        let pi2 = self.ord_form(degree + 1);
        let pitop = self.ord_form(degree + 2);
        GenForm::new(degree, pi, pi1, pi2, pitop).expect("random generalized form")
    }

    /// Random real type N=1 form `β + β1 m¹`.
    pub fn n1_form(&mut self, degree: i32) -> GenForm {
        let beta = self.real_form(degree);
        let beta1 = self.real_form(degree + 1);
        let f = GenForm::n1(&beta, &beta1);
        if f.is_zero() {
            GenForm::zero(&self.chart, degree)
        } else {
            f
        }
    }

    /// Random real so(η)-valued p-form: `η_a X_ab` antisymmetric.
    pub fn so_form(&mut self, eta: &FrameMetric, degree: i32) -> MatOrdForm {
        let n = eta.dim();
        let mut lower: Vec<Vec<OrdForm>> = vec![vec![OrdForm::zero(&self.chart, degree); n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                if self.rng.gen_bool(0.5) {
                    let f = self.real_form(degree);
                    lower[b][a] = -&f;
                    lower[a][b] = f;
                }
            }
        }
        FormMatrix::from_fn(n, n, |a, b| lower[a][b].scale_int(eta.get(a)))
            .with_tag(crate::matrix::Algebra::So)
    }

    /// Random element of SO(η) as a product of rationally parametrized
    /// rotations and boosts in coordinate-dependent or constant parameters.
    pub fn group_element(&mut self, eta: &FrameMetric, constant: bool) -> MatOrdForm {
        let n = eta.dim();
        let mut m: Vec<Vec<CExpr>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { CExpr::one() } else { CExpr::zero() }).collect())
            .collect();
        let factors = self.rng.gen_range(1..=2);
        for _ in 0..factors {
            let a = self.rng.gen_range(0..n);
            let mut b = self.rng.gen_range(0..n);
            while b == a {
                b = self.rng.gen_range(0..n);
            }
            let t = if constant {
                Expr::frac(self.rng.gen_range(1..=4), self.rng.gen_range(5..=9))
            } else {
                let i = self.rng.gen_range(0..n.min(self.chart.dim()));
                self.chart.coord_expr(i) / Expr::int(self.rng.gen_range(5..=9))
            };
            let tt = &t * &t;
            let (c, s, boost) = if eta.get(a) == eta.get(b) {
                let den = Expr::one() + &tt;
                ((Expr::one() - &tt) / &den, Expr::int(2) * &t / &den, false)
            } else {
                let den = Expr::one() - &tt;
                ((Expr::one() + &tt) / &den, Expr::int(2) * &t / &den, true)
            };
            let mut g: Vec<Vec<CExpr>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { CExpr::one() } else { CExpr::zero() }).collect())
                .collect();
            g[a][a] = CExpr::real(c.clone());
            g[b][b] = CExpr::real(c);
            g[a][b] = CExpr::real(if boost { s.clone() } else { -&s });
            g[b][a] = CExpr::real(s);
            m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| &m[i][k] * &g[k][j]).sum())
                        .collect()
                })
                .collect();
        }
        crate::frame::scalar_matrix(&self.chart, &m)
    }
}
