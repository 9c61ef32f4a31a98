//! Canonical real scalar expressions.
//!
//! An [`Expr`] is a rational function `num / den` over the rationals whose
//! indeterminates are [`Var`] atoms. Every constructor returns the canonical
//! representative:
//!
//! * powers of algebraic atoms are reduced (`sqrt(u)^2 -> u`,
//!   `cos(v)^2 -> 1 - sin(v)^2`, `u^(1/q)` to exponents below `q`);
//! * the denominator is free of algebraic atoms (conjugate rationalization
//!   for square and cube roots and for `cos`);
//! * `gcd(num, den) = 1` and `den` is monic.
//!
//! For the rational fragment this makes equality of values coincide with
//! structural equality, so zero testing is a pointer-free comparison.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::atom::{AtomKind, Var};
use crate::error::EvalError;
use crate::poly::{gcd, Coeff, Monomial, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct RatFunc {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

/// Canonical real scalar expression. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<RatFunc>);

/// Largest algebraic atom present in `p`.
fn highest_algebraic(p: &Poly) -> Option<Var> {
    p.vars().into_iter().filter(|v| v.is_algebraic()).max()
}

/// Rewrite every excess power of an algebraic atom by its relation.
/// Returns `(num, den)` with `den` free of algebraic atoms.
fn reduce(p: &Poly) -> (Poly, Poly) {
    let mut num = p.clone();
    let mut den = Poly::one();
    loop {
        let mut excess: BTreeMap<Var, u32> = BTreeMap::new();
        for m in num.terms.keys() {
            for (v, e) in m.factors() {
                if let Some((q, _)) = v.relation() {
                    if e >= q {
                        let k = excess.entry(v.clone()).or_insert(0);
                        *k = (*k).max(e / q);
                    }
                }
            }
        }
        if excess.is_empty() {
            return (num, den);
        }
        // u = P / Q for each atom with excess
        let mut parts: HashMap<Var, (Poly, Poly)> = HashMap::new();
        let mut common = Poly::one();
        for (v, k) in excess.iter() {
            let (_, u) = v.relation().unwrap();
            let pq = (u.0.num.clone(), u.0.den.clone());
            common = common.mul(&pq.1.pow(*k));
            parts.insert(v.clone(), pq);
        }
        let mut out = Poly::zero();
        let mut pow_cache: HashMap<(Var, u32, bool), Poly> = HashMap::new();
        let mut cached_pow = |v: &Var, e: u32, numer: bool, parts: &HashMap<Var, (Poly, Poly)>| {
            pow_cache
                .entry((v.clone(), e, numer))
                .or_insert_with(|| {
                    let (p, q) = &parts[v];
                    if numer {
                        p.pow(e)
                    } else {
                        q.pow(e)
                    }
                })
                .clone()
        };
        for (m, c) in num.terms.iter() {
            let mut mono = Monomial::one();
            let mut factor = Poly::one();
            for (v, e) in m.factors() {
                match excess.get(v) {
                    Some(kmax) => {
                        let q = v.relation().unwrap().0;
                        let k = e / q;
                        mono = mono.mul(&Monomial::var(v.clone(), e % q));
                        if k > 0 {
                            factor = factor.mul(&cached_pow(v, k, true, &parts));
                        }
                        if kmax - k > 0 {
                            factor = factor.mul(&cached_pow(v, kmax - k, false, &parts));
                        }
                    }
                    None => mono = mono.mul(&Monomial::var(v.clone(), *e)),
                }
            }
            for (v, kmax) in excess.iter() {
                if m.degree_of(v) == 0 {
                    factor = factor.mul(&cached_pow(v, *kmax, false, &parts));
                }
            }
            out = out.add(&factor.mul_term(c, &mono));
        }
        num = out;
        den = den.mul(&common);
    }
}

/// Multiplier that clears `g` from `den` (up to an algebraic-free factor).
fn conjugate_factor(den: &Poly, g: &Var) -> Option<Poly> {
    let (q, u) = g.relation()?;
    let cs = den.coefficients_in(g);
    let get = |k: u32| cs.get(&k).cloned().unwrap_or_default();
    let gp = |k: u32| Poly::term(Coeff::one(), Monomial::var(g.clone(), k));
    if cs.len() == 1 {
        let k = *cs.keys().next().unwrap();
        return Some(gp(q - k));
    }
    match q {
        2 => {
            let (a, b) = (get(0), get(1));
            Some(a.sub(&b.mul(&gp(1))))
        }
        3 => {
            let (a, b, c) = (get(0), get(1), get(2));
            let (pn, qd) = (&u.0.num, &u.0.den);
            let c0 = a.mul(&a).mul(qd).sub(&b.mul(&c).mul(pn));
            let c1 = c.mul(&c).mul(pn).sub(&a.mul(&b).mul(qd));
            let c2 = b.mul(&b).mul(qd).sub(&a.mul(&c).mul(qd));
            Some(c0.add(&c1.mul(&gp(1))).add(&c2.mul(&gp(2))))
        }
        _ => None,
    }
}

fn canonical(num: Poly, den: Poly) -> RatFunc {
    assert!(!den.is_zero(), "division by zero in symbolic expression");
    if num.is_zero() {
        return RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        };
    }
    let (mut num, mut den) = (num, den);
    let mut guard = 0;
    loop {
        let (n1, d1) = reduce(&num);
        let (n2, d2) = reduce(&den);
        num = n1.mul(&d2);
        den = d1.mul(&n2);
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        assert!(!den.is_zero(), "division by zero in symbolic expression");
        guard += 1;
        if guard > 16 {
            break;
        }
        match highest_algebraic(&den) {
            None => break,
            Some(g) => match conjugate_factor(&den, &g) {
                Some(cof) => {
                    num = num.mul(&cof);
                    den = den.mul(&cof);
                }
                None => break,
            },
        }
    }
    if let Some(c) = den.constant_value() {
        return RatFunc {
            num: num.scale(&c.recip()),
            den: Poly::one(),
        };
    }
    let g = gcd(&num, &den);
    if !g.is_one() {
        num = num.div_exact(&g).expect("gcd divides numerator");
        den = den.div_exact(&g).expect("gcd divides denominator");
    }
    let lc = den.leading_coeff();
    if !lc.is_one() {
        let inv = lc.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    RatFunc { num, den }
}

fn needs_reduction(p: &Poly) -> bool {
    p.terms.keys().any(|m| {
        m.factors()
            .iter()
            .any(|(v, e)| v.relation().map(|(q, _)| e >= q).unwrap_or(false))
    })
}

/// Largest `s` with `s^q | n` (trial division), returning `(s, n / s^q)`.
fn extract_power(n: &BigInt, q: u32) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= rest && p <= limit {
        let pq = num_traits::pow(p.clone(), q as usize);
        while (&rest % &pq).is_zero() {
            rest /= &pq;
            s *= &p;
        }
        p += 1;
    }
    if q == 1 {
        return (n.clone(), BigInt::one());
    }
    (s, rest)
}

impl Expr {
    fn from_ratfunc(r: RatFunc) -> Expr {
        Expr(Arc::new(r))
    }

    fn from_parts(num: Poly, den: Poly) -> Expr {
        Expr::from_ratfunc(canonical(num, den))
    }

    /// Polynomial already reduced and with trivial denominator.
    fn from_poly(p: Poly) -> Expr {
        if needs_reduction(&p) {
            Expr::from_parts(p, Poly::one())
        } else {
            Expr::from_ratfunc(RatFunc {
                num: p,
                den: Poly::one(),
            })
        }
    }

    pub(crate) fn from_var(v: Var) -> Expr {
        Expr::from_ratfunc(RatFunc {
            num: Poly::var(v),
            den: Poly::one(),
        })
    }

    pub fn zero() -> Expr {
        Expr::from_ratfunc(RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        })
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Coeff::from_integer(BigInt::from(n)))
    }

    pub fn frac(p: i64, q: i64) -> Expr {
        Expr::rational(Coeff::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(c: Coeff) -> Expr {
        Expr::from_ratfunc(RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        })
    }

    pub fn symbol(name: &str) -> Expr {
        Expr::from_var(Var::symbol(name))
    }

    pub fn numerator(&self) -> Expr {
        Expr::from_poly(self.0.num.clone())
    }

    pub fn denominator(&self) -> Expr {
        Expr::from_poly(self.0.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Coeff> {
        if self.0.den.is_one() {
            self.0.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn as_symbol(&self) -> Option<&str> {
        if !self.0.den.is_one() || !self.0.num.is_monomial() {
            return None;
        }
        let (m, c) = self.0.num.leading()?;
        if !c.is_one() || m.factors().len() != 1 || m.factors()[0].1 != 1 {
            return None;
        }
        m.factors()[0].0.symbol_name()
    }

    /// Leading numerator coefficient is negative.
    pub fn has_negative_sign(&self) -> bool {
        self.0.num.leading_coeff().is_negative()
    }

    pub(crate) fn max_depth(&self) -> u32 {
        self.0
            .num
            .vars()
            .iter()
            .chain(self.0.den.vars().iter())
            .map(|v| v.depth())
            .max()
            .unwrap_or(0)
    }

    /// Size of the canonical tree (terms plus nested atom sizes).
    pub fn size(&self) -> usize {
        let mut total = 0;
        for p in [&self.0.num, &self.0.den] {
            for (m, _) in p.terms() {
                total += 1;
                for (v, _) in m.factors() {
                    total += atom_size(v);
                }
            }
        }
        total
    }

    /// Names of every real symbol occurring, including inside atoms.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        for p in [&self.0.num, &self.0.den] {
            for v in p.vars() {
                match v.kind() {
                    AtomKind::Symbol(s) => {
                        out.insert(s.clone());
                    }
                    AtomKind::Sin(a) | AtomKind::Cos(a) | AtomKind::Exp(a) => {
                        a.collect_symbols(out)
                    }
                    AtomKind::Root { radicand, .. } => radicand.collect_symbols(out),
                }
            }
        }
    }

    /// No atoms other than plain symbols: canonical form decides zero.
    pub fn is_rational_fragment(&self) -> bool {
        self.0
            .num
            .vars()
            .iter()
            .chain(self.0.den.vars().iter())
            .all(|v| v.symbol_name().is_some())
    }

    /// Value together with the sum of absolute values of the numerator
    /// terms over `|den|`, a scale for deciding numerical cancellation.
    pub fn eval_scaled(
        &self,
        lookup: &dyn Fn(&str) -> Option<f64>,
    ) -> Result<(f64, f64), EvalError> {
        let mut memo: HashMap<Var, f64> = HashMap::new();
        let d = eval_poly(&self.0.den, lookup, &mut memo)?;
        if d == 0.0 {
            return Err(EvalError::Pole(self.to_string()));
        }
        let mut value = 0.0;
        let mut scale = 0.0;
        for (m, c) in self.0.num.terms() {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in m.factors() {
                t *= eval_var(v, lookup, &mut memo)?.powi(*e as i32);
            }
            value += t;
            scale += t.abs();
        }
        let (v, s) = (value / d, scale / d.abs());
        if !v.is_finite() {
            return Err(EvalError::Pole(self.to_string()));
        }
        Ok((v, s))
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.symbols().contains(name)
    }

    pub fn sin(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        if self.has_negative_sign() {
            return -Expr::from_var(Var::sin(&-self));
        }
        Expr::from_var(Var::sin(self))
    }

    pub fn cos(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        if self.has_negative_sign() {
            return Expr::from_var(Var::cos(&-self));
        }
        Expr::from_var(Var::cos(self))
    }

    /// `exp`, split over the terms of a polynomial argument so that
    /// `exp(a) * exp(-a)` cancels canonically.
    pub fn exp(&self) -> Expr {
        if self.is_zero() {
            return Expr::one();
        }
        if !self.0.den.is_one() {
            if self.has_negative_sign() {
                return Expr::one() / Expr::from_var(Var::exp(&-self));
            }
            return Expr::from_var(Var::exp(self));
        }
        let mut acc = Expr::one();
        for (m, c) in self.0.num.terms() {
            let (k, arg) = if c.is_integer() {
                (c.to_integer(), Poly::term(Coeff::one(), m.clone()))
            } else if c.is_negative() {
                (BigInt::from(-1), Poly::term(-c.clone(), m.clone()))
            } else {
                (BigInt::one(), Poly::term(c.clone(), m.clone()))
            };
            let atom = Expr::from_var(Var::exp(&Expr::from_poly(arg)));
            let k = k.to_i32().expect("exp exponent multiplier fits in i32");
            acc = acc * atom.powi(k);
        }
        acc
    }

    /// Principal real `index`-th root.
    pub fn root(&self, index: u32) -> Expr {
        assert!(index >= 1, "root index must be positive");
        if index == 1 || self.is_zero() {
            return self.clone();
        }
        if let Some(c) = self.as_rational() {
            if c.is_negative() {
                if index % 2 == 1 {
                    return -Expr::rational(-c).root(index);
                }
                return Expr::from_var(Var::root(self, index));
            }
            // (a/b)^(1/q) = (a b^(q-1))^(1/q) / b
            let a = c.numer().clone();
            let b = c.denom().clone();
            let n = &a * num_traits::pow(b.clone(), (index - 1) as usize);
            let (s, f) = extract_power(&n, index);
            let outside = Expr::rational(Coeff::new(s, b));
            if f.is_one() {
                return outside;
            }
            let inner = Expr::rational(Coeff::from_integer(f));
            return outside * Expr::from_var(Var::root(&inner, index));
        }
        Expr::from_var(Var::root(self, index))
    }

    pub fn sqrt(&self) -> Expr {
        self.root(2)
    }

    pub fn powi(&self, k: i32) -> Expr {
        if k < 0 {
            return Expr::one() / self.powi(-k);
        }
        let mut e = k as u32;
        let mut base = self.clone();
        let mut acc = Expr::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^(p/q)` through the principal `q`-th root.
    pub fn pow_rational(&self, exponent: &Coeff) -> Expr {
        let p = exponent
            .numer()
            .to_i32()
            .expect("exponent numerator fits in i32");
        let q = exponent
            .denom()
            .to_u32()
            .expect("exponent denominator fits in u32");
        if q == 1 {
            return self.powi(p);
        }
        self.root(q).powi(p)
    }

    /// Partial derivative with respect to the real symbol `name`.
    pub fn diff(&self, name: &str) -> Expr {
        let x = Var::symbol(name);
        let mut memo: HashMap<Var, Expr> = HashMap::new();
        self.diff_var(&x, &mut memo)
    }

    fn diff_var(&self, x: &Var, memo: &mut HashMap<Var, Expr>) -> Expr {
        let num_d = poly_derivative(&self.0.num, x, memo);
        if self.0.den.is_one() {
            return num_d;
        }
        let den_d = poly_derivative(&self.0.den, x, memo);
        let den = Expr::from_poly(self.0.den.clone());
        if den_d.is_zero() {
            return num_d / den;
        }
        let num = Expr::from_poly(self.0.num.clone());
        (num_d * &den - num * den_d) / (&den * &den)
    }

    /// Evaluate with every symbol bound by `lookup`.
    pub fn eval_with(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<f64, EvalError> {
        let mut memo: HashMap<Var, f64> = HashMap::new();
        self.eval_memo(lookup, &mut memo)
    }

    pub fn eval(&self, point: &HashMap<String, f64>) -> Result<f64, EvalError> {
        self.eval_with(&|s| point.get(s).copied())
    }

    fn eval_memo(
        &self,
        lookup: &dyn Fn(&str) -> Option<f64>,
        memo: &mut HashMap<Var, f64>,
    ) -> Result<f64, EvalError> {
        let n = eval_poly(&self.0.num, lookup, memo)?;
        let d = eval_poly(&self.0.den, lookup, memo)?;
        if d == 0.0 {
            return Err(EvalError::Pole(self.to_string()));
        }
        let v = n / d;
        if !v.is_finite() {
            return Err(EvalError::Pole(self.to_string()));
        }
        Ok(v)
    }

    /// Replace the symbol `name` by `value` everywhere (including atoms).
    pub fn subs(&self, name: &str, value: &Expr) -> Expr {
        let mut memo: HashMap<Var, Expr> = HashMap::new();
        let num = subs_poly(&self.0.num, name, value, &mut memo);
        let den = subs_poly(&self.0.den, name, value, &mut memo);
        num / den
    }
}

fn atom_size(v: &Var) -> usize {
    match v.kind() {
        AtomKind::Symbol(_) => 1,
        AtomKind::Sin(a) | AtomKind::Cos(a) | AtomKind::Exp(a) => 1 + a.size(),
        AtomKind::Root { radicand, .. } => 1 + radicand.size(),
    }
}

fn var_derivative(v: &Var, x: &Var, memo: &mut HashMap<Var, Expr>) -> Expr {
    if let Some(d) = memo.get(v) {
        return d.clone();
    }
    let d = match v.kind() {
        AtomKind::Symbol(_) => {
            if v == x {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        AtomKind::Sin(a) => {
            let da = a.diff_var(x, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                a.cos() * da
            }
        }
        AtomKind::Cos(a) => {
            let da = a.diff_var(x, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                -(a.sin() * da)
            }
        }
        AtomKind::Exp(a) => {
            let da = a.diff_var(x, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                Expr::from_var(v.clone()) * da
            }
        }
        AtomKind::Root { radicand, index } => {
            let du = radicand.diff_var(x, memo);
            if du.is_zero() {
                Expr::zero()
            } else {
                Expr::from_var(v.clone()) * du / (Expr::int(*index as i64) * radicand)
            }
        }
    };
    memo.insert(v.clone(), d.clone());
    d
}

fn poly_derivative(p: &Poly, x: &Var, memo: &mut HashMap<Var, Expr>) -> Expr {
    let mut acc = Expr::zero();
    for v in p.vars() {
        let dv = var_derivative(&v, x, memo);
        if dv.is_zero() {
            continue;
        }
        acc = acc + Expr::from_poly(p.partial(&v)) * dv;
    }
    acc
}

fn eval_var(
    v: &Var,
    lookup: &dyn Fn(&str) -> Option<f64>,
    memo: &mut HashMap<Var, f64>,
) -> Result<f64, EvalError> {
    if let Some(x) = memo.get(v) {
        return Ok(*x);
    }
    let x = match v.kind() {
        AtomKind::Symbol(s) => lookup(s).ok_or_else(|| EvalError::Unbound(s.clone()))?,
        AtomKind::Sin(a) => a.eval_memo(lookup, memo)?.sin(),
        AtomKind::Cos(a) => a.eval_memo(lookup, memo)?.cos(),
        AtomKind::Exp(a) => a.eval_memo(lookup, memo)?.exp(),
        AtomKind::Root { radicand, index } => {
            let u = radicand.eval_memo(lookup, memo)?;
            if u < 0.0 {
                if index % 2 == 0 {
                    return Err(EvalError::Domain(v.to_string()));
                }
                -(-u).powf(1.0 / *index as f64)
            } else if *index == 2 {
                u.sqrt()
            } else {
                u.powf(1.0 / *index as f64)
            }
        }
    };
    memo.insert(v.clone(), x);
    Ok(x)
}

fn eval_poly(
    p: &Poly,
    lookup: &dyn Fn(&str) -> Option<f64>,
    memo: &mut HashMap<Var, f64>,
) -> Result<f64, EvalError> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (v, e) in m.factors() {
            t *= eval_var(v, lookup, memo)?.powi(*e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

fn subs_var(v: &Var, name: &str, value: &Expr, memo: &mut HashMap<Var, Expr>) -> Expr {
    if let Some(e) = memo.get(v) {
        return e.clone();
    }
    let e = match v.kind() {
        AtomKind::Symbol(s) => {
            if s == name {
                value.clone()
            } else {
                Expr::from_var(v.clone())
            }
        }
        AtomKind::Sin(a) => a.subs(name, value).sin(),
        AtomKind::Cos(a) => a.subs(name, value).cos(),
        AtomKind::Exp(a) => a.subs(name, value).exp(),
        AtomKind::Root { radicand, index } => radicand.subs(name, value).root(*index),
    };
    memo.insert(v.clone(), e.clone());
    e
}

fn subs_poly(p: &Poly, name: &str, value: &Expr, memo: &mut HashMap<Var, Expr>) -> Expr {
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::rational(c.clone());
        for (v, e) in m.factors() {
            t = t * subs_var(v, name, value, memo).powi(*e as i32);
        }
        acc = acc + t;
    }
    acc
}

// ---------------------------------------------------------------- arithmetic

fn add_impl(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (ra, rb) = (&*a.0, &*b.0);
    if ra.den.is_one() && rb.den.is_one() {
        return Expr::from_ratfunc(RatFunc {
            num: ra.num.add(&rb.num),
            den: Poly::one(),
        });
    }
    if ra.den == rb.den {
        return Expr::from_parts(ra.num.add(&rb.num), ra.den.clone());
    }
    let g = gcd(&ra.den, &rb.den);
    let bd = rb.den.div_exact(&g).expect("gcd divides");
    let ad = ra.den.div_exact(&g).expect("gcd divides");
    let num = ra.num.mul(&bd).add(&rb.num.mul(&ad));
    Expr::from_parts(num, ra.den.mul(&bd))
}

fn mul_impl(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    let (ra, rb) = (&*a.0, &*b.0);
    if let Some(c) = ra.num.constant_value() {
        if ra.den.is_one() {
            return Expr::from_ratfunc(RatFunc {
                num: rb.num.scale(&c),
                den: rb.den.clone(),
            });
        }
    }
    if let Some(c) = rb.num.constant_value() {
        if rb.den.is_one() {
            return Expr::from_ratfunc(RatFunc {
                num: ra.num.scale(&c),
                den: ra.den.clone(),
            });
        }
    }
    if ra.den.is_one() && rb.den.is_one() {
        return Expr::from_poly(ra.num.mul(&rb.num));
    }
    let g1 = gcd(&ra.num, &rb.den);
    let g2 = gcd(&rb.num, &ra.den);
    let an = ra.num.div_exact(&g1).expect("gcd divides");
    let bd = rb.den.div_exact(&g1).expect("gcd divides");
    let bn = rb.num.div_exact(&g2).expect("gcd divides");
    let ad = ra.den.div_exact(&g2).expect("gcd divides");
    Expr::from_parts(an.mul(&bn), ad.mul(&bd))
}

fn div_impl(a: &Expr, b: &Expr) -> Expr {
    assert!(!b.is_zero(), "division by zero in symbolic expression");
    let inv = Expr::from_parts(b.0.den.clone(), b.0.num.clone());
    mul_impl(a, &inv)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $imp(&self, rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $imp(self, &rhs)
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $imp(self, rhs)
            }
        }
    };
}

fn sub_impl(a: &Expr, b: &Expr) -> Expr {
    add_impl(a, &neg_impl(b))
}

fn neg_impl(a: &Expr) -> Expr {
    Expr::from_ratfunc(RatFunc {
        num: a.0.num.neg(),
        den: a.0.den.clone(),
    })
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg_impl(&self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg_impl(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a + b)
    }
}

// ----------------------------------------------------------------- rendering

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| {
            let key = v.key();
            if *e == 1 {
                key.to_string()
            } else if key.contains('^') {
                format!("({key})^{e}")
            } else {
                format!("{key}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if m.is_one() {
            fmt_coeff(&a)
        } else if a.is_one() {
            fmt_monomial(m)
        } else {
            format!("{}*{}", fmt_coeff(&a), fmt_monomial(m))
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body)
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body)
            }
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.den.is_one() {
            f.write_str(&fmt_poly(&self.0.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.0.num), fmt_poly(&self.0.den))
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Expr {
        Expr::symbol(n)
    }

    #[test]
    fn polynomial_rules() {
        let r = s("r");
        assert_eq!((&r * &r).diff("r"), Expr::int(2) * &r);
        assert_eq!(r.sin().diff("r"), r.cos());
        assert!(r.diff("th").is_zero());
    }

    #[test]
    fn pythagorean_identity_is_canonical() {
        let th = s("th");
        let e = th.sin().powi(2) + th.cos().powi(2) - Expr::one();
        assert!(e.is_zero());
    }

    #[test]
    fn rational_normalization() {
        let (m, r) = (s("M"), s("r"));
        let f = Expr::one() - Expr::int(2) * &m / &r;
        let e = Expr::one() / &f * &f - Expr::one();
        assert!(e.is_zero());
        let g = (&r * &r - &m * &m) / (&r - &m);
        assert_eq!(g, &r + &m);
    }

    #[test]
    fn radicals_reduce_and_rationalize() {
        let r = s("r");
        let q = (Expr::one() - Expr::int(2) / &r).sqrt();
        assert_eq!(&q * &q, Expr::one() - Expr::int(2) / &r);
        let inv = Expr::one() / &q;
        assert_eq!(inv * &q, Expr::one());
        let two = Expr::int(2).sqrt();
        assert_eq!(&two * &two, Expr::int(2));
        assert_eq!(Expr::int(8).sqrt(), Expr::int(2) * &two);
        assert_eq!(Expr::frac(1, 2).sqrt(), &two / Expr::int(2));
        assert_eq!(Expr::int(9).sqrt(), Expr::int(3));
        let t = s("t");
        let c = t.root(3);
        assert_eq!(c.powi(3), t.clone());
        assert_eq!(Expr::one() / &c * c.powi(2), c.clone());
    }

    #[test]
    fn conjugate_with_cosine_in_denominator() {
        let th = s("th");
        let e = Expr::one() / (Expr::one() + th.cos());
        let back = Expr::one() / &e;
        assert_eq!(back, Expr::one() + th.cos());
    }

    #[test]
    fn exp_cancellation() {
        let r = s("r");
        assert!((r.exp() * (-&r).exp() - Expr::one()).is_zero());
        let two_r = Expr::int(2) * &r;
        assert_eq!(two_r.exp(), r.exp().powi(2));
    }

    #[test]
    fn display_round_trip_is_stable() {
        let (m, r) = (s("M"), s("r"));
        let e = (Expr::one() - Expr::int(2) * &m / &r).sqrt() * &m / (&r * &r);
        assert!(!e.to_string().is_empty());
        assert_eq!(e.to_string(), e.clone().to_string());
    }

    #[test]
    fn substitution() {
        let (x, y) = (s("x"), s("y"));
        let e = (&x * &y).sin() + &x;
        let out = e.subs("x", &Expr::int(0));
        assert!(out.is_zero());
        assert_eq!(e.subs("y", &Expr::zero()), x);
    }
}
