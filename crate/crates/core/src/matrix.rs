//! Dense matrices of forms with the exterior product as multiplication.

use std::fmt;

use gf_symexpr::{CExpr, ZeroPolicy, ZeroVerdict};

use crate::error::{CoreError, Result};
use crate::form::OrdForm;

/// What matrices of forms need from their entries.
pub trait Graded: Clone + PartialEq + fmt::Debug {
    fn degree(&self) -> i32;
    fn zero_like(&self, degree: i32) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn wedge(&self, other: &Self) -> Self;
    fn ext_d(&self) -> Self;
    fn conjugate(&self) -> Self;
    fn scaled(&self, k: &CExpr) -> Self;
    fn vanishes(&self) -> bool;
    fn zero_verdict(&self, policy: &ZeroPolicy) -> ZeroVerdict;
}

impl Graded for OrdForm {
    fn degree(&self) -> i32 {
        OrdForm::degree(self)
    }
    fn zero_like(&self, degree: i32) -> Self {
        OrdForm::zero(self.chart(), degree)
    }
    fn one_like(&self) -> Self {
        OrdForm::one(self.chart())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn wedge(&self, other: &Self) -> Self {
        OrdForm::wedge(self, other)
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

/// Constraint carried by a matrix of forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    None,
    /// Antisymmetric after lowering the first index with the frame metric.
    So,
    /// Trace-free 2×2 complex.
    Sl2,
}

#[derive(Clone)]
pub struct FormMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    pub tag: Algebra,
}

pub type MatOrdForm = FormMatrix<OrdForm>;

impl<F: Graded> FormMatrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        assert!(rows > 0 && cols > 0, "empty matrix");
        FormMatrix {
            rows,
            cols,
            data,
            tag: Algebra::None,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FormMatrix::new(rows, cols, data)
    }

    pub fn column(entries: Vec<F>) -> Self {
        let n = entries.len();
        FormMatrix::new(n, 1, entries)
    }

    /// Identity built from the unit of `proto`'s algebra.
    pub fn identity(n: usize, proto: &F) -> Self {
        let one = proto.one_like();
        let zero = one.zero_like(0);
        FormMatrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zeros(rows: usize, cols: usize, proto: &F, degree: i32) -> Self {
        let z = proto.zero_like(degree);
        FormMatrix::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn with_tag(mut self, tag: Algebra) -> Self {
        self.tag = tag;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn degree(&self) -> i32 {
        self.data[0].degree()
    }

    pub fn map<G: Graded>(&self, f: impl Fn(&F) -> G) -> FormMatrix<G> {
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            tag: self.tag,
        }
    }

    pub fn transpose(&self) -> Self {
        FormMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        FormMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).plus(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.negated())
    }

    pub fn scale(&self, k: &CExpr) -> Self {
        self.map(|x| x.scaled(k))
    }

    /// Matrix product with the exterior product on entries.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let deg = self.degree() + other.degree();
        let zero = self.data[0].zero_like(deg);
        FormMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.vanishes() || b.vanishes() {
                    continue;
                }
                acc = acc.plus(&a.wedge(b));
            }
            acc
        })
    }

    pub fn d(&self) -> Self {
        self.map(|x| x.ext_d())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|x| x.conjugate())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.vanishes())
    }

    pub fn trace(&self) -> F {
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows.min(self.cols) {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }

    pub fn verdict(&self, policy: &ZeroPolicy) -> ZeroVerdict {
        ZeroVerdict::all(self.data.iter().map(|x| x.zero_verdict(policy)))
    }

    /// Per-entry verdicts in row-major order.
    pub fn entry_verdicts(&self, policy: &ZeroPolicy) -> Vec<((usize, usize), ZeroVerdict)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.get(i, j).zero_verdict(policy)))
            .collect()
    }
}

/// Entrywise equality; the algebra tag is bookkeeping and is not compared.
impl<F: Graded> PartialEq for FormMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Graded> fmt::Debug for FormMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormMatrix {}x{} {:?}", self.rows, self.cols, self.tag)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                writeln!(f, "  [{i}][{j}] = {:?}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Inverse of a square matrix of complex scalars by Gauss-Jordan
/// elimination, pivoting on the entry with the smallest canonical size.
pub fn invert_scalar(m: &[Vec<CExpr>]) -> Result<Vec<Vec<CExpr>>> {
    let n = m.len();
    let mut a: Vec<Vec<CExpr>> = m.to_vec();
    let mut inv: Vec<Vec<CExpr>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { CExpr::one() } else { CExpr::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].size())
            .ok_or_else(|| {
                CoreError::DegenerateCoframe(format!("no nonzero pivot in column {}", col + 1))
            })?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Ok(inv)
}

/// Scalar matrix of 0-forms as plain scalars.
pub fn scalar_entries(m: &MatOrdForm) -> Vec<Vec<CExpr>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).coeff(0)).collect())
        .collect()
}
