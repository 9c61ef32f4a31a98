//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` under a lexicographic monomial order in
//! which larger [`Var`]s are more significant. The GCD is the classical
//! recursive primitive-PRS algorithm: content/primitive-part splitting in the
//! main variable, pseudo-remainders, and recursion on the contents.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::atom::Var;

pub type Coeff = BigRational;

/// Power product, sorted by variable in descending order, exponents > 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub(crate) SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = SmallVec::new();
        if e > 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_of(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                Ordering::Greater => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, ea) in self.0.iter() {
            if j < other.0.len() && &other.0[j].0 == a {
                let eb = other.0[j].1;
                if eb > *ea {
                    return None;
                }
                if ea > &eb {
                    out.push((a.clone(), ea - eb));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 > *a {
                return None;
            } else {
                out.push((a.clone(), *ea));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for (a, ea) in self.0.iter() {
            let eb = other.degree_of(a);
            if eb > 0 {
                out.push((a.clone(), (*ea).min(eb)));
            }
        }
        Monomial(out)
    }

    pub fn without(&self, v: &Var) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| w != v).cloned().collect())
    }

    pub fn with_degree(&self, v: &Var, e: u32) -> Monomial {
        self.without(v).mul(&Monomial::var(v.clone(), e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut i = 0;
        loop {
            match (self.0.get(i), other.0.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => {
                    match a.cmp(b) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                    match ea.cmp(eb) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Coeff::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    /// Largest variable occurring in the polynomial.
    pub fn main_var(&self) -> Option<Var> {
        self.terms
            .keys()
            .filter_map(|m| m.0.first().map(|(v, _)| v.clone()))
            .max()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for (v, _) in m.0.iter() {
                if !vs.contains(v) {
                    vs.push(v.clone());
                }
            }
        }
        vs.sort();
        vs
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_of(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in small.terms.iter() {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Coeff) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &Coeff, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.mul(mono), d * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to an indeterminate.
    pub fn partial(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_degree(v, e - 1), c * Coeff::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Coefficients with respect to `v`: `self = sum_k coeff[k] * v^k`.
    pub fn coefficients_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let e = m.degree_of(v);
            out.entry(e)
                .or_default()
                .add_term(m.without(v), c.clone());
        }
        out
    }

    /// Scaled to integer coefficients with unit content and positive leading coefficient.
    pub fn numeric_primitive(&self) -> Poly {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        if g.is_zero() {
            return self.clone();
        }
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        self.scale(&BigRational::new(l, g))
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact multivariate division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            rem = rem.sub(&divisor.mul_term(&qc, &qm));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Content with respect to `v`: GCD of the coefficients in `v`, monic.
    pub fn content_in(&self, v: &Var) -> Poly {
        let coeffs = self.coefficients_in(v);
        let mut g = Poly::zero();
        for c in coeffs.values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part_in(&self, v: &Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides polynomial")
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    pub fn pseudo_rem(&self, b: &Poly, v: &Var) -> Poly {
        let db = b.degree_in(v);
        let bc = b.coefficients_in(v);
        let lcb = bc.get(&db).cloned().unwrap_or_default();
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(v);
            if dr < db {
                return r;
            }
            let rc = r.coefficients_in(v);
            let lcr = rc.get(&dr).cloned().unwrap_or_default();
            let shift = Monomial::var(v.clone(), dr - db);
            let t = b.mul(&lcr).mul_term(&Coeff::one(), &shift);
            r = r.mul(&lcb).sub(&t);
        }
    }
}

/// `gcd(p, coefficients of q in x)`, smallest coefficients first.
fn gcd_with_coefficients(p: &Poly, q: &Poly, x: &Var) -> Poly {
    let mut coeffs: Vec<Poly> = q.coefficients_in(x).into_values().collect();
    coeffs.sort_by_key(|c| c.terms.len());
    let mut g = p.clone();
    for c in coeffs.iter() {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

/// Monic greatest common divisor (zero only if both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, p) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mm = m.terms.keys().next().unwrap().clone();
        let g = mm.gcd(&p.monomial_content());
        return Poly::term(Coeff::one(), g);
    }
    // Pull out common monomial factors first; keeps the PRS small.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let (a, b) = if ma.is_one() && mb.is_one() {
        (a.clone(), b.clone())
    } else {
        let one = Coeff::one();
        let a1 = Poly {
            terms: a.terms.iter().map(|(m, c)| (m.div(&ma).unwrap(), c.clone())).collect(),
        };
        let b1 = Poly {
            terms: b.terms.iter().map(|(m, c)| (m.div(&mb).unwrap(), c.clone())).collect(),
        };
        let g = gcd(&a1, &b1);
        return g.mul_term(&one, &mg).monic();
    };
    // A variable present in only one argument cannot occur in the gcd, so
    // the gcd divides every coefficient with respect to that variable.
    let (va, vb) = (a.vars(), b.vars());
    if let Some(x) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coefficients(&b, &a, x);
    }
    if let Some(x) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coefficients(&a, &b, x);
    }
    let x = match (a.main_var(), b.main_var()) {
        (Some(p), Some(q)) => p.max(q),
        _ => return Poly::one(),
    };
    let da = a.degree_in(&x);
    let db = b.degree_in(&x);
    if da == 0 {
        return gcd(&a, &b.content_in(&x));
    }
    if db == 0 {
        return gcd(&a.content_in(&x), &b);
    }
    let ca = a.content_in(&x);
    let cb = b.content_in(&x);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides").numeric_primitive();
    let mut q = b.div_exact(&cb).expect("content divides").numeric_primitive();
    if p.degree_in(&x) < q.degree_in(&x) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q, &x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&x) == 0 {
            q = Poly::one();
            break;
        }
        p = q;
        q = r.primitive_part_in(&x).numeric_primitive();
    }
    let g = if q.is_constant() {
        Poly::one()
    } else {
        q.primitive_part_in(&x)
    };
    c.mul(&g).monic()
}

