//! Verification pipelines over one metric and the report they produce.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use gf_core::axioms::run_axiom_suite;
use gf_core::cartan::{check_gen_bianchi, gen_curvature, n1_recover_coframe};
use gf_core::frame::{check_bianchi, first_structure_residual, so_residual};
use gf_core::genform::{lift_matrix, times_m1};
use gf_core::matrix::Graded;
use gf_core::oracle::CoordinateCurvature;
use gf_core::spinor::{
    line_element_residual, spinor_bianchi, spinor_curvature, spinor_first_cartan, split_connection,
    to_spinor_coframe, vacuum_residual,
};
use gf_core::vacuum::{
    build_l_pair, build_vacuum_connection, combined_equation_residual, expansion_check, line_element_chain,
    recover_coframe, vacuum_gf_coords, vacuum_mu_nu, Condition,
};
use gf_core::{FormMatrix, Geometry};
use gf_symexpr::{is_zero_complex, ZeroPolicy, ZeroVerdict};
use serde_json::{json, Value};

use crate::gmet::{Classification, GmetError, MetricSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Axioms,
    N1,
    N2Vacuum,
    All,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Axioms => "axioms",
            Mode::N1 => "n1",
            Mode::N2Vacuum => "n2vacuum",
            Mode::All => "all",
        }
    }

    fn runs_metric(self) -> bool {
        self != Mode::Axioms
    }

    fn runs_n1(self) -> bool {
        matches!(self, Mode::N1 | Mode::All)
    }

    fn runs_n2(self) -> bool {
        matches!(self, Mode::N2Vacuum | Mode::All)
    }

    fn runs_axioms(self) -> bool {
        matches!(self, Mode::Axioms | Mode::All)
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "axioms" => Ok(Mode::Axioms),
            "n1" => Ok(Mode::N1),
            "n2vacuum" => Ok(Mode::N2Vacuum),
            "all" => Ok(Mode::All),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub policy: ZeroPolicy,
    /// seed of the axiom suite
    pub seed: u64,
    pub axiom_trials: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            policy: ZeroPolicy::SymbolicOnly,
            seed: 2024,
            axiom_trials: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

/// One scheduled check. `wall_time_ms` is the time spent producing the
/// verdict; checks that share a computation charge it to the first one.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub check_id: String,
    pub expected: String,
    pub verdict: String,
    pub passed: bool,
    pub inconclusive: bool,
    pub residual_summary: String,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    fn to_json(&self, timing: bool) -> Value {
        json!({
            "checkId": self.check_id,
            "expected": self.expected,
            "verdict": self.verdict,
            "passed": self.passed,
            "residualSummary": self.residual_summary,
            "wallTime": if timing { json!(self.wall_time_ms) } else { Value::Null },
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConditionRecord {
    pub name: String,
    pub verdict: String,
    pub offending: Option<(usize, usize, String)>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub metric: String,
    pub mode: Mode,
    pub expected: Option<Classification>,
    pub policy: ZeroPolicy,
    pub checks: Vec<CheckRecord>,
    pub flatness: Vec<(String, String)>,
    /// combined equation split by slot
    pub combined: Vec<(String, String)>,
    pub conditions: Vec<ConditionRecord>,
    pub recovered: Option<bool>,
    pub total_ms: f64,
}

fn policy_json(p: &ZeroPolicy) -> Value {
    match p {
        ZeroPolicy::SymbolicOnly => json!({ "kind": "symbolic" }),
        ZeroPolicy::WithSampling { seed, samples, tol } => {
            json!({ "kind": "numeric", "seed": seed, "samples": samples, "tol": tol })
        }
    }
}

impl Report {
    pub fn outcome(&self) -> Outcome {
        if self.checks.iter().any(|c| c.inconclusive) {
            Outcome::Inconclusive
        } else if self.checks.iter().all(|c| c.passed) {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome().exit_code()
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// The JSON report; with `timing` off the output depends only on the
    /// inputs and the seed.
    pub fn to_json(&self, timing: bool) -> Value {
        let pairs = |v: &[(String, String)]| -> Value {
            Value::Object(v.iter().map(|(k, x)| (k.clone(), json!(x))).collect())
        };
        let conditions: Vec<Value> = self
            .conditions
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "verdict": c.verdict,
                    "offending": c.offending.as_ref().map(|(r, col, e)| json!({ "row": r, "col": col, "expr": e })),
                })
            })
            .collect();
        json!({
            "metric": self.metric,
            "mode": self.mode.as_str(),
            "expected": self.expected.map(|c| c.as_str()),
            "policy": policy_json(&self.policy),
            "checks": self.checks.iter().map(|c| c.to_json(timing)).collect::<Vec<_>>(),
            "flatnessVerdicts": pairs(&self.flatness),
            "combinedResiduals": pairs(&self.combined),
            "ordinarinessConditions": conditions,
            "recovered": self.recovered,
            "overall": self.outcome().as_str(),
            "timing": if timing { json!({ "totalMs": self.total_ms }) } else { Value::Null },
        })
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else if c.inconclusive { "??  " } else { "FAIL" };
            out.push_str(&format!("{mark} {:<36} expected {:<8} got {}\n", c.check_id, c.expected, c.verdict));
            if !c.passed && !c.residual_summary.is_empty() {
                out.push_str(&format!("     {}\n", c.residual_summary));
            }
        }
        out.push_str(&format!("{}: {}\n", self.metric, self.outcome().as_str()));
        out
    }
}

const SUMMARY_LIMIT: usize = 400;

fn clip(s: String) -> String {
    if s.chars().count() <= SUMMARY_LIMIT {
        s
    } else {
        let head: String = s.chars().take(SUMMARY_LIMIT).collect();
        format!("{head}...")
    }
}

/// Verdict of a whole matrix plus the first entry that is not zero-like.
fn matrix_verdict<F: Graded + fmt::Display>(m: &FormMatrix<F>, policy: &ZeroPolicy) -> (ZeroVerdict, String) {
    let entries = m.entry_verdicts(policy);
    let witness = entries
        .iter()
        .find(|(_, v)| !v.is_zero_like())
        .map(|((i, j), v)| format!("entry ({i},{j}): {v}: {}", m.get(*i, *j)))
        .unwrap_or_default();
    (ZeroVerdict::all(entries.into_iter().map(|(_, v)| v)), witness)
}

struct Runner {
    checks: Vec<CheckRecord>,
}

impl Runner {
    /// A check whose verdict is expected to be zero-like (`want_zero`) or
    /// nonzero-like.
    fn zero(&mut self, id: &str, want_zero: bool, f: impl FnOnce() -> (ZeroVerdict, String)) -> ZeroVerdict {
        let start = Instant::now();
        let (v, witness) = f();
        let passed = if want_zero { v.is_zero_like() } else { v.is_nonzero_like() };
        let summary = match (&v, witness.is_empty()) {
            (ZeroVerdict::Inconclusive { reason }, _) => reason.clone(),
            (_, false) => witness,
            _ => String::new(),
        };
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            expected: if want_zero { "zero" } else { "nonzero" }.into(),
            verdict: v.to_string(),
            passed,
            inconclusive: v.is_inconclusive(),
            residual_summary: clip(summary),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        v
    }

    fn plain(&mut self, id: &str, want_zero: bool, f: impl FnOnce() -> ZeroVerdict) -> ZeroVerdict {
        self.zero(id, want_zero, || (f(), String::new()))
    }

    fn condition(&mut self, c: &Condition, id: &str, want_zero: bool) {
        let witness = c
            .offending
            .as_ref()
            .map(|(r, col, e)| format!("entry ({r},{col}): {e}"))
            .unwrap_or_default();
        self.zero(id, want_zero, || (c.verdict.clone(), witness));
    }

    fn flag(&mut self, id: &str, expected: &str, passed: bool, inconclusive: bool, verdict: String, summary: String) {
        self.checks.push(CheckRecord {
            check_id: id.to_string(),
            expected: expected.to_string(),
            verdict,
            passed: passed && !inconclusive,
            inconclusive,
            residual_summary: clip(summary),
            wall_time_ms: 0.0,
        });
    }

    fn error(&mut self, id: &str, expected: &str, message: String) {
        self.flag(id, expected, false, false, "error".into(), message);
    }
}

struct Partial {
    flatness: Vec<(String, String)>,
    combined: Vec<(String, String)>,
    conditions: Vec<ConditionRecord>,
    recovered: Option<bool>,
}

fn structure_checks(r: &mut Runner, g: &Geometry, expect: Classification, policy: &ZeroPolicy) -> ZeroVerdict {
    r.zero("levi_civita.torsion_free", true, || {
        matrix_verdict(&first_structure_residual(&g.coframe, &g.omega), policy)
    });
    r.zero("levi_civita.metric_compatible", true, || matrix_verdict(&so_residual(&g.omega, &g.eta), policy));
    let b = check_bianchi(&g.omega, &g.curvature, &g.coframe, policy);
    r.plain("bianchi.first", true, || b.first.clone());
    r.plain("bianchi.second", true, || b.second.clone());
    r.zero("curvature.flat", expect == Classification::Flat, || matrix_verdict(&g.curvature, policy));
    match CoordinateCurvature::new(&g.coframe, &g.eta) {
        Ok(oracle) => r.plain("ricci.oracle", expect.ricci_flat(), || oracle.ricci_verdict(policy, &g.coframe)),
        Err(e) => {
            r.error("ricci.oracle", "zero", e.to_string());
            ZeroVerdict::Inconclusive { reason: e.to_string() }
        }
    }
}

fn n1_checks(r: &mut Runner, g: &Geometry, policy: &ZeroPolicy, out: &mut Partial) {
    let flat = lift_matrix(&g.omega).sub(&times_m1(&g.curvature));
    let v = r.zero("n1.flat_connection", true, || matrix_verdict(&gen_curvature(&flat), policy));
    out.flatness.push(("n1".into(), v.label().into()));
    let theta = g.coframe.forms().to_vec();
    let chart = g.chart();
    let xi: Vec<_> = (0..chart.dim()).map(|k| chart.coord_expr(k)).collect();
    let start = Instant::now();
    match n1_recover_coframe(&g.omega, &theta, &xi, policy) {
        Ok(rec) => {
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            r.zero("n1.recovery", true, || matrix_verdict(&rec.residual, policy));
            if let Some(c) = r.checks.last_mut() {
                c.wall_time_ms += elapsed;
            }
            r.plain("n1.torsion_match", true, || rec.torsion_match.clone());
            r.plain("n1.bianchi", true, || {
                let b = check_gen_bianchi(&gen_curvature(&flat), &rec.recovered, &flat, policy);
                ZeroVerdict::all([b.first, b.second, b.first_identity])
            });
        }
        Err(e) => {
            for id in ["n1.recovery", "n1.torsion_match", "n1.bianchi"] {
                r.error(id, "zero", e.to_string());
            }
        }
    }
}

fn n2_checks(r: &mut Runner, g: &Geometry, expect: Classification, ricci: &ZeroVerdict, policy: &ZeroPolicy, out: &mut Partial) {
    let vac = expect.ricci_flat();
    let start = Instant::now();
    let theta = match to_spinor_coframe(&g.coframe, &g.eta, policy) {
        Ok(t) => t,
        Err(e) => {
            r.error("spinor.coframe", "valid", e.to_string());
            return;
        }
    };
    r.flag("spinor.coframe", "valid", true, false, "valid".into(), String::new());
    r.checks.last_mut().unwrap().wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let domain = g.chart().domain();
    r.plain("spinor.line_element", true, || {
        ZeroVerdict::all(
            line_element_residual(&theta.theta, &g.coframe, &g.eta)
                .iter()
                .flatten()
                .map(|z| is_zero_complex(z, policy, domain)),
        )
    });
    let ws = split_connection(&g.omega);
    let ws_bar = ws.conj();
    r.zero("spinor.first_cartan", true, || {
        matrix_verdict(&spinor_first_cartan(&theta, &ws, &ws_bar), policy)
    });
    let curv = spinor_curvature(&ws);
    r.plain("spinor.bianchi", true, || {
        let b = spinor_bianchi(&curv, &theta, &ws, policy);
        ZeroVerdict::all([b.first, b.second])
    });
    let spin_vac = r.zero("spinor.vacuum_residual", vac, || matrix_verdict(&vacuum_residual(&curv, &theta), policy));

    let start = Instant::now();
    let conn = match build_vacuum_connection(&ws, &curv, policy) {
        Ok(c) => c,
        Err(e) => {
            r.error("vacuum.flat_pair", "zero", e.to_string());
            return;
        }
    };
    r.plain("vacuum.flat_pair", true, || ZeroVerdict::all([conn.flat.clone(), conn.flat_bar.clone()]));
    r.checks.last_mut().unwrap().wall_time_ms += start.elapsed().as_secs_f64() * 1e3;
    out.flatness.push(("A".into(), conn.flat.label().into()));
    out.flatness.push(("Abar".into(), conn.flat_bar.label().into()));

    let start = Instant::now();
    let combined = combined_equation_residual(&theta, &conn.a, &conn.a_bar, policy);
    let all = combined.all();
    r.zero("vacuum.combined_equation", vac, || {
        let witness = if all.is_zero_like() {
            String::new()
        } else {
            matrix_verdict(&combined.residual, policy).1
        };
        (all.clone(), witness)
    });
    r.checks.last_mut().unwrap().wall_time_ms += start.elapsed().as_secs_f64() * 1e3;
    for (slot, v) in [
        ("ordinary", &combined.ordinary),
        ("m", &combined.m),
        ("mbar", &combined.mbar),
        ("mmbar", &combined.mmbar),
    ] {
        out.combined.push((slot.into(), v.label().into()));
    }
    let verdicts = [&all, &spin_vac, ricci];
    let agree = verdicts.iter().all(|v| v.is_zero_like()) || verdicts.iter().all(|v| v.is_nonzero_like());
    let labels: Vec<&str> = verdicts.iter().map(|v| v.label()).collect();
    r.flag(
        "vacuum.oracle_agreement",
        "agree",
        agree,
        verdicts.iter().any(|v| v.is_inconclusive()),
        if agree { "agree" } else { "disagree" }.into(),
        format!("combined {}, spinor {}, ricci {}", labels[0], labels[1], labels[2]),
    );

    let pair = build_l_pair(&ws, &ws_bar);
    r.plain("vacuum.l_pair", true, || {
        let c = pair.check(&conn, policy);
        ZeroVerdict::all([c.inverse, c.maurer_cartan, c.maurer_cartan_bar, c.unit_determinant])
    });
    let (mu, nu) = vacuum_mu_nu(&theta, &ws, &ws_bar);
    r.plain("vacuum.expansion", true, || ZeroVerdict::all(expansion_check(&ws, &ws_bar, &mu, &nu, policy).agree));

    let start = Instant::now();
    let x = vacuum_gf_coords(&theta, &ws, &ws_bar);
    let rec = recover_coframe(&pair, &x, &theta, policy);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let o = &rec.conditions;
    r.condition(&o.normal_form, "vacuum.condition.normal_form", true);
    r.checks.last_mut().unwrap().wall_time_ms += elapsed;
    r.condition(&o.covariant_mu, "vacuum.condition.covariant_mu", true);
    r.condition(&o.nu_relation, "vacuum.condition.nu_relation", true);
    r.condition(&o.curvature_balance, "vacuum.condition.curvature_balance", vac);
    for c in o.conditions() {
        out.conditions.push(ConditionRecord {
            name: c.name.to_string(),
            verdict: c.verdict.label().to_string(),
            offending: c.offending.clone(),
        });
    }
    let recovered = rec.recovered();
    let undecided = rec.matches_theta.as_ref().is_some_and(|v| v.is_inconclusive())
        || o.conditions().iter().any(|c| c.verdict.is_inconclusive());
    r.flag(
        "vacuum.recovered",
        if vac { "true" } else { "false" },
        recovered == vac,
        undecided,
        recovered.to_string(),
        match &rec.matches_theta {
            Some(v) if !v.is_zero_like() => format!("e - theta: {v}"),
            _ => String::new(),
        },
    );
    out.recovered = Some(recovered);
    r.plain("vacuum.line_element", true, || {
        ZeroVerdict::all(line_element_chain(&rec.e, &x, &g.coframe, &g.eta, policy))
    });
}

fn axiom_checks(r: &mut Runner, opts: &PipelineOptions) {
    let start = Instant::now();
    let report = run_axiom_suite(opts.seed, opts.axiom_trials);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    for (k, (name, t)) in report.tallies.iter().enumerate() {
        r.flag(
            &format!("axioms.{name}"),
            "all pass",
            t.failed == 0,
            false,
            format!("{}/{} passed", t.passed, t.passed + t.failed),
            t.first_failure.clone().unwrap_or_default(),
        );
        if k == 0 {
            r.checks.last_mut().unwrap().wall_time_ms = elapsed;
        }
    }
}

/// Run the checks of `mode` on `spec`. Input problems (the metric does not
/// elaborate) are errors; everything else is a verdict in the report.
pub fn run_pipeline(spec: &MetricSpec, mode: Mode, opts: &PipelineOptions) -> Result<Report, GmetError> {
    let start = Instant::now();
    let policy = &opts.policy;
    let mut r = Runner { checks: Vec::new() };
    let mut out = Partial {
        flatness: Vec::new(),
        combined: Vec::new(),
        conditions: Vec::new(),
        recovered: None,
    };
    if mode.runs_axioms() {
        axiom_checks(&mut r, opts);
    }
    if mode.runs_metric() {
        let g = spec.geometry()?;
        let ricci = structure_checks(&mut r, &g, spec.expect, policy);
        if mode.runs_n1() {
            n1_checks(&mut r, &g, policy, &mut out);
        }
        if mode.runs_n2() {
            n2_checks(&mut r, &g, spec.expect, &ricci, policy, &mut out);
        }
    }
    Ok(Report {
        metric: spec.name.clone(),
        mode,
        expected: mode.runs_metric().then_some(spec.expect),
        policy: policy.clone(),
        checks: r.checks,
        flatness: out.flatness,
        combined: out.combined,
        conditions: out.conditions,
        recovered: out.recovered,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShowWhat {
    Connection,
    Curvature,
    Spinor,
    GfCoords,
}

impl FromStr for ShowWhat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "connection" => Ok(ShowWhat::Connection),
            "curvature" => Ok(ShowWhat::Curvature),
            "spinor" => Ok(ShowWhat::Spinor),
            "gfcoords" => Ok(ShowWhat::GfCoords),
            other => Err(format!("unknown item `{other}`")),
        }
    }
}

fn list_entries<F: Graded + fmt::Display>(out: &mut String, name: &str, m: &FormMatrix<F>) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if !e.vanishes() {
                out.push_str(&format!("{name}[{i}][{j}] = {e}\n"));
            }
        }
    }
}

/// Human-readable listing of a derived object; zero entries are omitted.
pub fn show(spec: &MetricSpec, what: ShowWhat, policy: &ZeroPolicy) -> Result<String, GmetError> {
    let g = spec.geometry()?;
    let mut out = String::new();
    match what {
        ShowWhat::Connection => list_entries(&mut out, "omega", &g.omega),
        ShowWhat::Curvature => list_entries(&mut out, "Omega", &g.curvature),
        ShowWhat::Spinor | ShowWhat::GfCoords => {
            let theta = to_spinor_coframe(&g.coframe, &g.eta, policy)?;
            let ws = split_connection(&g.omega);
            if what == ShowWhat::Spinor {
                list_entries(&mut out, "theta", &theta.theta);
                list_entries(&mut out, "omega_s", &ws);
                list_entries(&mut out, "Omega_s", &spinor_curvature(&ws));
            } else {
                list_entries(&mut out, "x", &vacuum_gf_coords(&theta, &ws, &ws.conj()));
            }
        }
    }
    Ok(out)
}
