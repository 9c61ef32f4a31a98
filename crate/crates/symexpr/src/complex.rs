//! Complex scalars as pairs of canonical real expressions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::EvalError;
use crate::expr::Expr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CExpr {
    pub re: Expr,
    pub im: Expr,
}

impl CExpr {
    pub fn new(re: Expr, im: Expr) -> Self {
        CExpr { re, im }
    }

    pub fn real(re: Expr) -> Self {
        CExpr {
            re,
            im: Expr::zero(),
        }
    }

    pub fn imag(im: Expr) -> Self {
        CExpr {
            re: Expr::zero(),
            im,
        }
    }

    pub fn zero() -> Self {
        CExpr::real(Expr::zero())
    }

    pub fn one() -> Self {
        CExpr::real(Expr::one())
    }

    pub fn i() -> Self {
        CExpr::imag(Expr::one())
    }

    pub fn int(n: i64) -> Self {
        CExpr::real(Expr::int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        CExpr::real(Expr::frac(p, q))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Self {
        CExpr {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|^2`
    pub fn norm_sqr(&self) -> Expr {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Expr) -> Self {
        CExpr {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        CExpr {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return CExpr::one() / self.powi(-k);
        }
        let mut acc = CExpr::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff(&self, name: &str) -> Self {
        CExpr {
            re: self.re.diff(name),
            im: self.im.diff(name),
        }
    }

    pub fn subs(&self, name: &str, value: &Expr) -> Self {
        CExpr {
            re: self.re.subs(name, value),
            im: self.im.subs(name, value),
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut s = self.re.symbols();
        s.extend(self.im.symbols());
        s
    }

    pub fn size(&self) -> usize {
        self.re.size() + self.im.size()
    }

    pub fn eval_with(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<Complex64, EvalError> {
        Ok(Complex64::new(self.re.eval_with(lookup)?, self.im.eval_with(lookup)?))
    }

    pub fn eval(&self, point: &HashMap<String, f64>) -> Result<Complex64, EvalError> {
        self.eval_with(&|s| point.get(s).copied())
    }
}

fn add_impl(a: &CExpr, b: &CExpr) -> CExpr {
    CExpr {
        re: &a.re + &b.re,
        im: &a.im + &b.im,
    }
}

fn sub_impl(a: &CExpr, b: &CExpr) -> CExpr {
    CExpr {
        re: &a.re - &b.re,
        im: &a.im - &b.im,
    }
}

fn mul_impl(a: &CExpr, b: &CExpr) -> CExpr {
    if a.im.is_zero() {
        return b.scale(&a.re);
    }
    if b.im.is_zero() {
        return a.scale(&b.re);
    }
    CExpr {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
}

fn div_impl(a: &CExpr, b: &CExpr) -> CExpr {
    if b.im.is_zero() {
        return CExpr {
            re: &a.re / &b.re,
            im: &a.im / &b.re,
        };
    }
    let n = b.norm_sqr();
    let p = mul_impl(a, &b.conj());
    CExpr {
        re: &p.re / &n,
        im: &p.im / &n,
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<CExpr> for CExpr {
            type Output = CExpr;
            fn $method(self, rhs: CExpr) -> CExpr {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&CExpr> for CExpr {
            type Output = CExpr;
            fn $method(self, rhs: &CExpr) -> CExpr {
                $imp(&self, rhs)
            }
        }
        impl $tr<CExpr> for &CExpr {
            type Output = CExpr;
            fn $method(self, rhs: CExpr) -> CExpr {
                $imp(self, &rhs)
            }
        }
        impl $tr<&CExpr> for &CExpr {
            type Output = CExpr;
            fn $method(self, rhs: &CExpr) -> CExpr {
                $imp(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for CExpr {
    type Output = CExpr;
    fn neg(self) -> CExpr {
        -&self
    }
}

impl Neg for &CExpr {
    type Output = CExpr;
    fn neg(self) -> CExpr {
        CExpr {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl From<Expr> for CExpr {
    fn from(e: Expr) -> Self {
        CExpr::real(e)
    }
}

impl std::iter::Sum for CExpr {
    fn sum<I: Iterator<Item = CExpr>>(iter: I) -> CExpr {
        iter.fold(CExpr::zero(), |a, b| a + b)
    }
}

impl fmt::Display for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i*({})", self.im),
            (false, false) => write!(f, "{} + i*({})", self.re, self.im),
        }
    }
}

impl fmt::Debug for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CExpr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_is_involutive() {
        let z = CExpr::new(Expr::symbol("x"), Expr::symbol("y").sin());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn division_inverts_multiplication() {
        let z = CExpr::new(Expr::symbol("x"), Expr::int(2));
        let w = CExpr::new(Expr::one(), Expr::symbol("y"));
        assert_eq!(&(&z * &w) / &w, z);
        assert_eq!(CExpr::i() * CExpr::i(), CExpr::int(-1));
    }

    #[test]
    fn evaluates_both_parts() {
        let z = CExpr::i().scale(&Expr::symbol("th").cos());
        let v = z.eval_with(&|_| Some(0.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 1.0));
    }
}
