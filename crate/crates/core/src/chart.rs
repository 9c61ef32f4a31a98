use std::collections::BTreeSet;
use std::sync::Arc;

use gf_symexpr::{Domain, Expr};

use crate::error::{CoreError, Result};

/// Coordinates, parameters and their sampling domain.
#[derive(Debug)]
pub struct Chart {
    coords: Vec<String>,
    params: Vec<String>,
    domain: Domain,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    pub fn new(coords: &[&str]) -> Result<ChartRef> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        Chart::with_domain(coords, Vec::new(), Domain::new())
    }

    pub fn with_domain(coords: Vec<String>, params: Vec<String>, domain: Domain) -> Result<ChartRef> {
        if coords.is_empty() || coords.len() > 8 {
            return Err(CoreError::Dimension(coords.len()));
        }
        let mut seen = BTreeSet::new();
        for c in coords.iter().chain(params.iter()) {
            if !seen.insert(c.clone()) {
                return Err(CoreError::DuplicateCoordinate(c.clone()));
            }
        }
        Ok(Arc::new(Chart {
            coords,
            params,
            domain,
        }))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn coord_expr(&self, i: usize) -> Expr {
        Expr::symbol(&self.coords[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn same(a: &ChartRef, b: &ChartRef) -> bool {
        Arc::ptr_eq(a, b) || a.coords == b.coords
    }
}
