//! Tri-state zero testing.
//!
//! A canonical zero is `ProvenZero`. A canonical nonzero in the rational
//! fragment is `ProvenNonZero`. Otherwise the canonical form may hide an
//! identity between atoms, so under the symbolic policy a nonzero verdict
//! also needs a numerical witness, and under the sampling policy the value
//! is sampled inside the declared domain.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::CExpr;
use crate::expr::Expr;

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    ProvenZero,
    ProvenNonZero,
    NumericallyZero { samples: usize, max_abs: f64 },
    NumericallyNonZero { samples: usize, max_abs: f64 },
    Inconclusive { reason: String },
}

impl ZeroVerdict {
    pub fn is_proven_zero(&self) -> bool {
        matches!(self, ZeroVerdict::ProvenZero)
    }

    pub fn is_zero_like(&self) -> bool {
        matches!(
            self,
            ZeroVerdict::ProvenZero | ZeroVerdict::NumericallyZero { .. }
        )
    }

    pub fn is_nonzero_like(&self) -> bool {
        matches!(
            self,
            ZeroVerdict::ProvenNonZero | ZeroVerdict::NumericallyNonZero { .. }
        )
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, ZeroVerdict::Inconclusive { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ProvenZero => "ProvenZero",
            ZeroVerdict::ProvenNonZero => "ProvenNonZero",
            ZeroVerdict::NumericallyZero { .. } => "NumericallyZero",
            ZeroVerdict::NumericallyNonZero { .. } => "NumericallyNonZero",
            ZeroVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    /// Verdict for "all of these vanish".
    pub fn all<I: IntoIterator<Item = ZeroVerdict>>(verdicts: I) -> ZeroVerdict {
        let mut numeric: Option<(usize, f64)> = None;
        let mut inconclusive: Option<ZeroVerdict> = None;
        let mut nonzero: Option<ZeroVerdict> = None;
        for v in verdicts {
            match v {
                ZeroVerdict::ProvenZero => {}
                ZeroVerdict::NumericallyZero { samples, max_abs } => {
                    let (s, m) = numeric.unwrap_or((usize::MAX, 0.0));
                    numeric = Some((s.min(samples), m.max(max_abs)));
                }
                ZeroVerdict::ProvenNonZero => return ZeroVerdict::ProvenNonZero,
                v @ ZeroVerdict::NumericallyNonZero { .. } => {
                    if nonzero.is_none() {
                        nonzero = Some(v)
                    }
                }
                v @ ZeroVerdict::Inconclusive { .. } => {
                    if inconclusive.is_none() {
                        inconclusive = Some(v)
                    }
                }
            }
        }
        if let Some(v) = nonzero {
            return v;
        }
        if let Some(v) = inconclusive {
            return v;
        }
        match numeric {
            Some((samples, max_abs)) => ZeroVerdict::NumericallyZero { samples, max_abs },
            None => ZeroVerdict::ProvenZero,
        }
    }
}

impl fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroVerdict::NumericallyZero { samples, max_abs }
            | ZeroVerdict::NumericallyNonZero { samples, max_abs } => {
                write!(f, "{}(samples={samples}, maxAbs={max_abs:.3e})", self.label())
            }
            ZeroVerdict::Inconclusive { reason } => write!(f, "Inconclusive({reason})"),
            _ => f.write_str(self.label()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum ZeroPolicy {
    #[default]
    SymbolicOnly,
    WithSampling { seed: u64, samples: usize, tol: f64 },
}

/// Declared range of one real symbol; bounds may depend on other symbols.
#[derive(Clone, Debug)]
pub struct SymbolRange {
    pub symbol: String,
    pub lower: Option<Expr>,
    pub upper: Option<Expr>,
}

/// Parameter and coordinate assumptions used for sampling.
#[derive(Clone, Debug, Default)]
pub struct Domain {
    ranges: Vec<SymbolRange>,
}

const DEFAULT_RANGE: (f64, f64) = (0.3, 1.7);
const WITNESS_SEED: u64 = 0x9e37_79b9_7f4a_7c15;
const WITNESS_POINTS: usize = 6;
const RELATIVE_CANCELLATION: f64 = 1e-9;

impl Domain {
    pub fn new() -> Self {
        Domain::default()
    }

    pub fn add_range(&mut self, symbol: &str, lower: Option<Expr>, upper: Option<Expr>) {
        self.ranges.push(SymbolRange {
            symbol: symbol.to_string(),
            lower,
            upper,
        });
    }

    pub fn with_range(mut self, symbol: &str, lower: Option<Expr>, upper: Option<Expr>) -> Self {
        self.add_range(symbol, lower, upper);
        self
    }

    pub fn ranges(&self) -> &[SymbolRange] {
        &self.ranges
    }

    fn bounds_of<'a>(&'a self, symbol: &'a str) -> impl Iterator<Item = &'a SymbolRange> + 'a {
        self.ranges.iter().filter(move |r| r.symbol == symbol)
    }

    /// One random point covering `symbols` and everything their bounds use.
    /// `None` if a range turned out empty at this draw.
    pub fn sample<R: Rng>(
        &self,
        symbols: &BTreeSet<String>,
        rng: &mut R,
    ) -> Option<HashMap<String, f64>> {
        let mut needed = symbols.clone();
        loop {
            let mut extra = BTreeSet::new();
            for s in needed.iter() {
                for r in self.bounds_of(s) {
                    for b in r.lower.iter().chain(r.upper.iter()) {
                        for t in b.symbols() {
                            if !needed.contains(&t) {
                                extra.insert(t);
                            }
                        }
                    }
                }
            }
            if extra.is_empty() {
                break;
            }
            needed.extend(extra);
        }
        let mut point: HashMap<String, f64> = HashMap::new();
        let mut pending: Vec<String> = needed.into_iter().collect();
        while !pending.is_empty() {
            let ready = pending.iter().position(|s| {
                self.bounds_of(s).all(|r| {
                    r.lower
                        .iter()
                        .chain(r.upper.iter())
                        .all(|b| b.symbols().iter().all(|t| point.contains_key(t)))
                })
            });
            // a cyclic declaration falls back to unconstrained sampling
            let (idx, constrained) = match ready {
                Some(i) => (i, true),
                None => (0, false),
            };
            let s = pending.remove(idx);
            let mut lo: Option<f64> = None;
            let mut hi: Option<f64> = None;
            if constrained {
                for r in self.bounds_of(&s) {
                    if let Some(b) = &r.lower {
                        let v = b.eval(&point).ok()?;
                        lo = Some(lo.map_or(v, |x: f64| x.max(v)));
                    }
                    if let Some(b) = &r.upper {
                        let v = b.eval(&point).ok()?;
                        hi = Some(hi.map_or(v, |x: f64| x.min(v)));
                    }
                }
            }
            let (lo, hi) = match (lo, hi) {
                (Some(l), Some(h)) => (l, h),
                (Some(l), None) => (l, l + 1.5 * l.abs().max(1.0)),
                (None, Some(h)) => (h - 1.5 * h.abs().max(1.0), h),
                (None, None) => DEFAULT_RANGE,
            };
            let w = hi - lo;
            if w.is_nan() || w <= 0.0 {
                return None;
            }
            let v = rng.gen_range((lo + 0.05 * w)..(hi - 0.05 * w));
            point.insert(s, v);
        }
        Some(point)
    }

    /// `n` points from a seeded generator, skipping draws with empty ranges.
    pub fn sample_points(
        &self,
        symbols: &BTreeSet<String>,
        seed: u64,
        n: usize,
    ) -> Vec<HashMap<String, f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0;
        while out.len() < n && attempts < 20 * n.max(1) {
            attempts += 1;
            if let Some(p) = self.sample(symbols, &mut rng) {
                out.push(p);
            }
        }
        out
    }
}

/// Zero test for a single real expression.
pub fn is_zero(e: &Expr, policy: &ZeroPolicy, domain: &Domain) -> ZeroVerdict {
    all_zero(std::slice::from_ref(e), policy, domain)
}

/// Zero test for a complex expression (both parts).
pub fn is_zero_complex(z: &CExpr, policy: &ZeroPolicy, domain: &Domain) -> ZeroVerdict {
    all_zero(&[z.re.clone(), z.im.clone()], policy, domain)
}

/// Joint zero test: do all of `exprs` vanish identically?
pub fn all_zero(exprs: &[Expr], policy: &ZeroPolicy, domain: &Domain) -> ZeroVerdict {
    let nonzero: Vec<&Expr> = exprs.iter().filter(|e| !e.is_zero()).collect();
    if nonzero.is_empty() {
        return ZeroVerdict::ProvenZero;
    }
    if nonzero.iter().any(|e| e.is_rational_fragment()) {
        return ZeroVerdict::ProvenNonZero;
    }
    let mut symbols = BTreeSet::new();
    for e in nonzero.iter() {
        symbols.extend(e.symbols());
    }
    match policy {
        ZeroPolicy::SymbolicOnly => {
            let points = domain.sample_points(&symbols, WITNESS_SEED, WITNESS_POINTS);
            let mut evaluated = false;
            for p in points.iter() {
                for e in nonzero.iter() {
                    if let Ok((v, scale)) = e.eval_scaled(&|s| p.get(s).copied()) {
                        evaluated = true;
                        if v.abs() > RELATIVE_CANCELLATION * scale {
                            return ZeroVerdict::ProvenNonZero;
                        }
                    }
                }
            }
            let first = nonzero[0];
            let reason = if evaluated {
                format!("nonzero canonical form vanishes numerically: {first}")
            } else {
                format!("no evaluable point for {first}")
            };
            ZeroVerdict::Inconclusive { reason }
        }
        ZeroPolicy::WithSampling { seed, samples, tol } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut taken = 0;
            let mut max_abs: f64 = 0.0;
            let mut attempts = 0;
            while taken < *samples && attempts < 10 * samples.max(&1) {
                attempts += 1;
                let Some(p) = domain.sample(&symbols, &mut rng) else {
                    continue;
                };
                let vals: Result<Vec<f64>, _> = nonzero
                    .iter()
                    .map(|e| e.eval_with(&|s| p.get(s).copied()))
                    .collect();
                if let Ok(vals) = vals {
                    taken += 1;
                    for v in vals {
                        max_abs = max_abs.max(v.abs());
                    }
                }
            }
            if taken < *samples {
                return ZeroVerdict::Inconclusive {
                    reason: format!(
                        "only {taken} of {samples} sample points evaluable for {}",
                        nonzero[0]
                    ),
                };
            }
            if max_abs < *tol {
                ZeroVerdict::NumericallyZero {
                    samples: taken,
                    max_abs,
                }
            } else {
                ZeroVerdict::NumericallyNonZero {
                    samples: taken,
                    max_abs,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str) -> Expr {
        Expr::symbol(n)
    }

    #[test]
    fn trig_identity_is_proven() {
        let th = sym("th");
        let e = th.sin().powi(2) + th.cos().powi(2) - Expr::one();
        assert_eq!(
            is_zero(&e, &ZeroPolicy::SymbolicOnly, &Domain::new()),
            ZeroVerdict::ProvenZero
        );
    }

    #[test]
    fn hidden_radical_identity_is_not_claimed_nonzero() {
        let e = Expr::int(2).sqrt() * Expr::int(3).sqrt() - Expr::int(6).sqrt();
        assert!(!e.is_zero());
        assert!(is_zero(&e, &ZeroPolicy::SymbolicOnly, &Domain::new()).is_inconclusive());
        let sampled = ZeroPolicy::WithSampling {
            seed: 1,
            samples: 10,
            tol: 1e-9,
        };
        assert!(matches!(
            is_zero(&e, &sampled, &Domain::new()),
            ZeroVerdict::NumericallyZero { samples: 10, .. }
        ));
    }

    #[test]
    fn witness_confirms_nonzero() {
        let r = sym("r");
        let e = r.sqrt() - Expr::one();
        assert_eq!(
            is_zero(&e, &ZeroPolicy::SymbolicOnly, &Domain::new()),
            ZeroVerdict::ProvenNonZero
        );
    }

    #[test]
    fn sampling_respects_dependent_bounds() {
        let m = sym("M");
        let d = Domain::new()
            .with_range("M", Some(Expr::zero()), None)
            .with_range("r", Some(Expr::int(2) * &m), None);
        let names: BTreeSet<String> = ["r".to_string()].into_iter().collect();
        for p in d.sample_points(&names, 3, 50) {
            assert!(p["r"] > 2.0 * p["M"]);
            assert!(p["M"] > 0.0);
        }
    }

    #[test]
    fn combining_verdicts() {
        let v = ZeroVerdict::all(vec![
            ZeroVerdict::ProvenZero,
            ZeroVerdict::NumericallyZero {
                samples: 5,
                max_abs: 1e-12,
            },
        ]);
        assert!(matches!(v, ZeroVerdict::NumericallyZero { samples: 5, .. }));
        assert_eq!(
            ZeroVerdict::all(vec![ZeroVerdict::ProvenZero, ZeroVerdict::ProvenNonZero]),
            ZeroVerdict::ProvenNonZero
        );
    }
}
