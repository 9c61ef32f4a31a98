use std::collections::BTreeSet;

use gf_symexpr::ZeroPolicy;
use gfc::{catalog, parse_metric, run_pipeline, Classification, Mode, Outcome, PipelineOptions};

fn opts() -> PipelineOptions {
    PipelineOptions {
        axiom_trials: 10,
        ..PipelineOptions::default()
    }
}

fn spec(name: &str) -> gfc::MetricSpec {
    catalog::load(name).unwrap().unwrap()
}

#[test]
fn schwarzschild_vacuum_confirmed() {
    let r = run_pipeline(&spec("schwarzschild"), Mode::N2Vacuum, &opts()).unwrap();
    assert_eq!(r.outcome(), Outcome::Pass, "{}", r.summary());
    assert_eq!(r.check("vacuum.combined_equation").unwrap().verdict, "ProvenZero");
    assert_eq!(r.recovered, Some(true));
    assert!(r.conditions.iter().all(|c| c.verdict == "ProvenZero"));
}

#[test]
fn de_sitter_nonvacuum_confirmed() {
    let r = run_pipeline(&spec("de_sitter"), Mode::N2Vacuum, &opts()).unwrap();
    assert_eq!(r.outcome(), Outcome::Pass, "{}", r.summary());
    let c = r.check("vacuum.combined_equation").unwrap();
    assert_eq!(c.expected, "nonzero");
    assert!(c.verdict.contains("NonZero"));
    assert!(!c.residual_summary.is_empty());
    assert_eq!(r.recovered, Some(false));
    let balance = r.conditions.iter().find(|c| c.name.starts_with("Omega")).unwrap();
    assert!(balance.offending.is_some());
}

#[test]
fn minkowski_spherical_n1_recovers_coframe() {
    let r = run_pipeline(&spec("minkowski_spherical"), Mode::N1, &opts()).unwrap();
    assert_eq!(r.outcome(), Outcome::Pass, "{}", r.summary());
    assert_eq!(r.check("n1.recovery").unwrap().verdict, "ProvenZero");
    assert!(r.check("vacuum.combined_equation").is_none());
    assert_eq!(r.recovered, None);
}

#[test]
fn wrong_expectation_fails() {
    let mut s = spec("de_sitter");
    s.expect = Classification::Vacuum;
    let r = run_pipeline(&s, Mode::N2Vacuum, &opts()).unwrap();
    assert_eq!(r.outcome(), Outcome::Fail);
    assert_eq!(r.exit_code(), 1);
    let failed: BTreeSet<&str> = r.failures().map(|c| c.check_id.as_str()).collect();
    assert!(failed.contains("vacuum.combined_equation"));
    assert!(failed.contains("ricci.oracle"));
    assert!(failed.contains("vacuum.recovered"));
    // the flat-pair and Bianchi checks do not depend on the expectation
    assert!(!failed.contains("vacuum.flat_pair") && !failed.contains("spinor.bianchi"));

    let mut s = spec("schwarzschild");
    s.expect = Classification::Flat;
    let r = run_pipeline(&s, Mode::N1, &opts()).unwrap();
    let failed: Vec<&str> = r.failures().map(|c| c.check_id.as_str()).collect();
    assert_eq!(failed, ["curvature.flat"]);
}

#[test]
fn every_check_appears_once() {
    for mode in [Mode::Axioms, Mode::N1, Mode::N2Vacuum, Mode::All] {
        let r = run_pipeline(&spec("kasner"), mode, &opts()).unwrap();
        let ids: BTreeSet<&str> = r.checks.iter().map(|c| c.check_id.as_str()).collect();
        assert_eq!(ids.len(), r.checks.len(), "{mode}");
    }
    let count = |m| run_pipeline(&spec("kasner"), m, &opts()).unwrap().checks.len();
    assert_eq!(count(Mode::Axioms), 6);
    assert_eq!(count(Mode::All), count(Mode::Axioms) + count(Mode::N1) + count(Mode::N2Vacuum) - 6);
}

#[test]
fn reports_are_deterministic_without_timing() {
    let a = run_pipeline(&spec("flrw_radiation"), Mode::All, &opts()).unwrap();
    let b = run_pipeline(&spec("flrw_radiation"), Mode::All, &opts()).unwrap();
    let (ja, jb) = (a.to_json(false), b.to_json(false));
    assert_eq!(serde_json::to_string(&ja).unwrap(), serde_json::to_string(&jb).unwrap());
    assert!(ja["timing"].is_null());
    assert!(a.to_json(true)["timing"]["totalMs"].is_number());
    for key in ["metric", "checks", "flatnessVerdicts", "combinedResiduals", "ordinarinessConditions", "recovered", "overall"] {
        assert!(!ja[key].is_null(), "{key}");
    }
}

#[test]
fn sampling_policy_agrees() {
    let policy = ZeroPolicy::WithSampling {
        seed: 3,
        samples: 10,
        tol: 1e-9,
    };
    for name in ["schwarzschild", "flrw_radiation"] {
        let o = PipelineOptions { policy: policy.clone(), ..opts() };
        let r = run_pipeline(&spec(name), Mode::N2Vacuum, &o).unwrap();
        assert_eq!(r.outcome(), Outcome::Pass, "{name}\n{}", r.summary());
    }
}

const HIDDEN_IDENTITY: &str = "gmet 1
name = disguised_plane
expect = flat

[chart]
coords = t, x, y, z
1/2 < x < 2

[metric]
signature = +---
coframe1 = d t
coframe2 = d x
coframe3 = x * (sin(2*x) - 2*sin(x)*cos(x) + 1) * d y
coframe4 = d z
";

#[test]
fn hidden_identity_is_inconclusive_symbolically() {
    // flat polar coordinates, with 1 written through a double-angle identity
    let s = parse_metric(HIDDEN_IDENTITY).unwrap();
    let r = run_pipeline(&s, Mode::N1, &opts()).unwrap();
    assert_eq!(r.outcome(), Outcome::Inconclusive);
    assert_eq!(r.exit_code(), 2);
    let c = r.check("curvature.flat").unwrap();
    assert!(c.inconclusive && c.residual_summary.contains("sin"));
    let sampled = PipelineOptions {
        policy: ZeroPolicy::WithSampling {
            seed: 1,
            samples: 10,
            tol: 1e-9,
        },
        ..opts()
    };
    let r = run_pipeline(&s, Mode::N1, &sampled).unwrap();
    assert_eq!(r.outcome(), Outcome::Pass, "{}", r.summary());
}

#[test]
fn euclidean_metric_fails_spinor_stage_only() {
    let src = "gmet 1\nname = plane4\nexpect = flat\n\n[chart]\ncoords = a, b, c, e\n\n[metric]\nsignature = ++++\ncoframe1 = d a\ncoframe2 = d b\ncoframe3 = d c\ncoframe4 = d e\n";
    let s = parse_metric(src).unwrap();
    assert_eq!(run_pipeline(&s, Mode::N1, &opts()).unwrap().outcome(), Outcome::Pass);
    let r = run_pipeline(&s, Mode::N2Vacuum, &opts()).unwrap();
    let failed: Vec<&str> = r.failures().map(|c| c.check_id.as_str()).collect();
    assert_eq!(failed, ["spinor.coframe"]);
}
