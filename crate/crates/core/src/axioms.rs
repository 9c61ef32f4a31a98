//! Randomized check of the generalized-form algebra against its axioms and
//! against the brute-force monomial multiplier.

use gf_symexpr::{ZeroPolicy, ZeroVerdict};
use rand::Rng;
use serde_json::{json, Value};

use crate::chart::{Chart, ChartRef};
use crate::genform::monomial::MonomialForm;
use crate::genform::GenForm;
use crate::random::FormSampler;

pub const AXIOMS: [&str; 6] = [
    "graded_commutativity",
    "associativity",
    "leibniz",
    "d_squared",
    "monomial_product",
    "monomial_derivative",
];

#[derive(Clone, Debug, Default)]
pub struct AxiomTally {
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub seed: u64,
    pub trials: usize,
    pub tallies: Vec<(&'static str, AxiomTally)>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|(_, t)| t.failed == 0)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .tallies
            .iter()
            .map(|(name, t)| {
                json!({
                    "checkId": name,
                    "passed": t.passed,
                    "failed": t.failed,
                    "firstFailure": t.first_failure,
                })
            })
            .collect();
        json!({ "seed": self.seed, "trials": self.trials, "checks": checks })
    }
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn draw_degree(s: &mut FormSampler, at_least: i32) -> i32 {
    s.rng().gen_range(at_least.max(-2)..=4)
}

pub fn axiom_chart() -> ChartRef {
    Chart::new(&["t", "x", "y", "z"]).expect("fixed chart")
}

/// `trials` random triples with degrees in −2..=4 whose pairwise and triple
/// products stay at or above −2.
pub fn run_axiom_suite(seed: u64, trials: usize) -> AxiomReport {
    let chart = axiom_chart();
    let mut s = FormSampler::new(&chart, seed);
    let policy = ZeroPolicy::SymbolicOnly;
    let mut tallies: Vec<(&'static str, AxiomTally)> = AXIOMS.iter().map(|n| (*n, AxiomTally::default())).collect();
    let mut record = |k: usize, trial: usize, v: ZeroVerdict| {
        let t = &mut tallies[k].1;
        if v.is_proven_zero() {
            t.passed += 1;
        } else {
            t.failed += 1;
            t.first_failure.get_or_insert_with(|| format!("trial {trial}: {v}"));
        }
    };
    for trial in 0..trials {
        let p = draw_degree(&mut s, -2);
        let q = draw_degree(&mut s, -2 - p);
        let r = draw_degree(&mut s, (-2 - p - q).max(-2 - q));
        let a = s.gen_form(p);
        let b = s.gen_form(q);
        let c = s.gen_form(r);

        let ab = a.wedge(&b);
        let ba = b.wedge(&a).scale_int(sign(p * q));
        record(0, trial, (&ab - &ba).verdict(&policy));

        let assoc = &ab.wedge(&c) - &a.wedge(&b.wedge(&c));
        record(1, trial, assoc.verdict(&policy));

        let leibniz = &(&ab.d() - &a.d().wedge(&b)) - &a.wedge(&b.d()).scale_int(sign(p));
        record(2, trial, leibniz.verdict(&policy));

        record(3, trial, a.d().d().verdict(&policy));

        let brute = MonomialForm::from_genform(&a).mul(&MonomialForm::from_genform(&b)).to_genform(p + q);
        record(4, trial, (&ab - &brute).verdict(&policy));

        let brute_d = MonomialForm::from_genform(&a).d().to_genform(p + 1);
        record(5, trial, (&a.d() - &brute_d).verdict(&policy));
    }
    AxiomReport { seed, trials, tallies }
}

/// `d c − a` for the potential `c` of `a = d f`, `f` random of degree `p`.
pub fn exactness_residual(f: &GenForm, policy: &ZeroPolicy) -> crate::Result<ZeroVerdict> {
    let a = f.d();
    let c = crate::genform::potential_of_closed(&a, policy)?;
    Ok((&c.d() - &a).verdict(policy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_axiom_suite(3, 12);
        assert!(r.all_passed(), "{:?}", r.tallies);
        assert_eq!(r.tallies.iter().map(|(_, t)| t.passed).min(), Some(12));
    }
}
