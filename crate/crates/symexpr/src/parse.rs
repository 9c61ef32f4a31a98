//! Text grammar for scalar expressions.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | 'i' | func '(' sum ')' | '(' sum ')'
//! func    := sqrt | sin | cos | exp
//! ```
//!
//! Numbers are integers or decimals (read exactly). Exponents must be
//! rational constants; a non-integer exponent takes the principal root of a
//! real base. With differentials enabled, `d <ident>` reads as the formal
//! symbol returned by [`differential_symbol`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::complex::CExpr;
use crate::error::ParseError;
use crate::expr::Expr;
use crate::poly::Coeff;

/// Internal symbol standing for `d <coord>` in coframe rows.
pub fn differential_symbol(coord: &str) -> String {
    format!("d@{coord}")
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions<'a> {
    /// If set, any other identifier is an error.
    pub known: Option<&'a BTreeSet<String>>,
    /// Accept `d <ident>`; the identifier must then be in `coords` when given.
    pub differentials: bool,
    pub coords: Option<&'a BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Coeff),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut value = if int_part.is_empty() {
                Coeff::zero()
            } else {
                Coeff::from_integer(int_part.parse::<BigInt>().unwrap())
            };
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                if !frac.is_empty() {
                    let num = frac.parse::<BigInt>().unwrap();
                    let den = num_traits::pow(BigInt::from(10), frac.len());
                    value += Coeff::new(num, den);
                }
            }
            toks.push((Tok::Num(value), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError::new(1, col, format!("unexpected character `{c}`")));
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    opts: &'a ParseOptions<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(1, self.col(), msg))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn sum(&mut self) -> Result<CExpr, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = acc + self.product()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<CExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let col = self.col();
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ParseError::new(1, col, "division by zero"));
                    }
                    acc = acc / rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<CExpr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<CExpr, ParseError> {
        let base_col = self.col();
        let base = self.primary()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let exponent = self.unary()?;
        let q = match (exponent.re.as_rational(), exponent.im.is_zero()) {
            (Some(q), true) => q,
            _ => return Err(ParseError::new(1, col, "exponent must be a rational constant")),
        };
        if q.is_integer() {
            let k = q
                .to_integer()
                .to_i32()
                .ok_or_else(|| ParseError::new(1, col, "exponent too large"))?;
            if k < 0 && base.is_zero() {
                return Err(ParseError::new(1, base_col, "zero raised to a negative power"));
            }
            return Ok(base.powi(k));
        }
        if !base.is_real() {
            return Err(ParseError::new(
                1,
                base_col,
                "fractional power of a complex base",
            ));
        }
        if q.denom().to_u32().is_none() || q.numer().to_i32().is_none() {
            return Err(ParseError::new(1, col, "exponent too large"));
        }
        Ok(CExpr::real(base.re.pow_rational(&q)))
    }

    fn primary(&mut self) -> Result<CExpr, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(c) => Ok(CExpr::real(Expr::rational(c))),
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, col),
            Tok::End => Err(ParseError::new(1, col, "unexpected end of expression")),
            Tok::Op(c) => Err(ParseError::new(1, col, format!("unexpected `{c}`"))),
        }
    }

    fn ident(&mut self, name: String, col: usize) -> Result<CExpr, ParseError> {
        if matches!(name.as_str(), "sqrt" | "sin" | "cos" | "exp") && *self.peek() == Tok::Op('(') {
            self.bump();
            let arg_col = self.col();
            let arg = self.sum()?;
            self.expect(')')?;
            if !arg.is_real() {
                return Err(ParseError::new(
                    1,
                    arg_col,
                    format!("{name} of a complex argument"),
                ));
            }
            let a = arg.re;
            let v = match name.as_str() {
                "sqrt" => a.sqrt(),
                "sin" => a.sin(),
                "cos" => a.cos(),
                _ => a.exp(),
            };
            return Ok(CExpr::real(v));
        }
        if name == "i" {
            return Ok(CExpr::i());
        }
        if name == "d" && self.opts.differentials {
            if let Tok::Ident(coord) = self.peek().clone() {
                let ccol = self.col();
                self.bump();
                if let Some(coords) = self.opts.coords {
                    if !coords.contains(&coord) {
                        return Err(ParseError::new(
                            1,
                            ccol,
                            format!("unknown coordinate `{coord}`"),
                        ));
                    }
                }
                return Ok(CExpr::real(Expr::symbol(&differential_symbol(&coord))));
            }
        }
        if let Some(known) = self.opts.known {
            if !known.contains(&name) {
                return Err(ParseError::new(1, col, format!("unknown symbol `{name}`")));
            }
        }
        Ok(CExpr::real(Expr::symbol(&name)))
    }
}

/// Parse with explicit options.
pub fn parse_with(src: &str, opts: &ParseOptions<'_>) -> Result<CExpr, ParseError> {
    let lexer = lex(src)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        opts,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parse a complex scalar; any identifier is accepted as a real symbol.
pub fn parse_complex(src: &str) -> Result<CExpr, ParseError> {
    parse_with(src, &ParseOptions::default())
}

/// Parse a real scalar.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let z = parse_complex(src)?;
    if !z.is_real() {
        return Err(ParseError::new(1, 1, "expected a real expression"));
    }
    Ok(z.re)
}

/// Rational constant from a string, e.g. `"2/3"`.
pub fn parse_rational(src: &str) -> Result<Coeff, ParseError> {
    parse_expr(src)?
        .as_rational()
        .ok_or_else(|| ParseError::new(1, 1, "expected a rational constant"))
}
