//! Exact symbolic scalars for exterior calculus.
//!
//! [`Expr`] is a canonical real rational function over coordinate and
//! parameter symbols extended by `sqrt`, `u^(1/q)`, `sin`, `cos` and `exp`
//! atoms; [`CExpr`] pairs two of them into a complex scalar. The zero test
//! in [`zero`] is tri-state: canonical simplification first, then sampling
//! or a numerical witness.

// Atoms carry a lazily filled relation cache that takes no part in Eq, Ord or Hash.
#![allow(clippy::mutable_key_type)]

mod atom;
mod complex;
mod error;
mod expr;
mod parse;
mod poly;
pub mod zero;

pub use complex::CExpr;
pub use error::{EvalError, ParseError};
pub use expr::Expr;
pub use num_complex::Complex64;
pub use parse::{
    differential_symbol, parse_complex, parse_expr, parse_rational, parse_with, ParseOptions,
};
pub use poly::Coeff;
pub use zero::{all_zero, is_zero, is_zero_complex, Domain, SymbolRange, ZeroPolicy, ZeroVerdict};
