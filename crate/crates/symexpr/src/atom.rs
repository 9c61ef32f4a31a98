//! Hash-consed indeterminates.
//!
//! Every polynomial variable is an [`Var`]: either a plain real symbol
//! (chart coordinate or parameter) or an elementary function applied to a
//! canonical expression. Atoms are interned by their rendered key, so two
//! atoms are equal exactly when their `Arc`s are the same pointer.
//!
//! Variables are totally ordered by `(depth, key)`. The depth of a symbol is
//! zero and the depth of a function atom is one more than the deepest atom
//! in its argument, so the algebraic relations attached to `cos` and radical
//! atoms only ever rewrite a variable into strictly shallower ones.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use once_cell::sync::{Lazy, OnceCell};

use crate::expr::Expr;

#[derive(Debug)]
pub(crate) enum AtomKind {
    Symbol(String),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
    /// `radicand^(1/index)`, principal real branch.
    Root { radicand: Expr, index: u32 },
}

pub(crate) struct AtomData {
    pub(crate) kind: AtomKind,
    depth: u32,
    key: String,
    /// For algebraic atoms: `self^order = replacement`.
    relation: OnceCell<Option<(u32, Expr)>>,
}

#[derive(Clone)]
pub struct Var(Arc<AtomData>);

static INTERNER: Lazy<Mutex<HashMap<String, Arc<AtomData>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn intern(kind: AtomKind, depth: u32, key: String) -> Var {
    let mut table = INTERNER.lock().expect("atom interner poisoned");
    if let Some(existing) = table.get(&key) {
        return Var(existing.clone());
    }
    let data = Arc::new(AtomData {
        kind,
        depth,
        key: key.clone(),
        relation: OnceCell::new(),
    });
    table.insert(key, data.clone());
    Var(data)
}

impl Var {
    pub(crate) fn symbol(name: &str) -> Var {
        intern(AtomKind::Symbol(name.to_string()), 0, name.to_string())
    }

    pub(crate) fn sin(arg: &Expr) -> Var {
        let key = format!("sin({arg})");
        intern(AtomKind::Sin(arg.clone()), arg.max_depth() + 1, key)
    }

    pub(crate) fn cos(arg: &Expr) -> Var {
        let key = format!("cos({arg})");
        intern(AtomKind::Cos(arg.clone()), arg.max_depth() + 1, key)
    }

    pub(crate) fn exp(arg: &Expr) -> Var {
        let key = format!("exp({arg})");
        intern(AtomKind::Exp(arg.clone()), arg.max_depth() + 1, key)
    }

    pub(crate) fn root(radicand: &Expr, index: u32) -> Var {
        let key = if index == 2 {
            format!("sqrt({radicand})")
        } else {
            format!("({radicand})^(1/{index})")
        };
        intern(
            AtomKind::Root {
                radicand: radicand.clone(),
                index,
            },
            radicand.max_depth() + 1,
            key,
        )
    }

    pub(crate) fn kind(&self) -> &AtomKind {
        &self.0.kind
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn symbol_name(&self) -> Option<&str> {
        match &self.0.kind {
            AtomKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_algebraic(&self) -> bool {
        self.relation().is_some()
    }

    /// `Some((q, u))` when `self^q = u` holds identically.
    pub(crate) fn relation(&self) -> Option<&(u32, Expr)> {
        self.0
            .relation
            .get_or_init(|| match &self.0.kind {
                AtomKind::Root { radicand, index } => Some((*index, radicand.clone())),
                AtomKind::Cos(arg) => {
                    let s = Expr::from_var(Var::sin(arg));
                    Some((2, Expr::one() - &s * &s))
                }
                _ => None,
            })
            .as_ref()
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .depth
            .cmp(&other.0.depth)
            .then_with(|| self.0.key.cmp(&other.0.key))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.key)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.0.key)
    }
}
