//! Reader and writer for `.gmet` metric definitions.
//!
//! ```text
//! gmet 1
//! name = schwarzschild
//! expect = vacuum                 # vacuum | nonVacuum | flat
//! note = free text                # optional, repeatable
//!
//! [chart]
//! coords = t, r, th, ph
//! 2*M < r < 20                    # optional coordinate ranges
//!
//! [params]
//! M > 0                           # a bare name declares a free parameter
//!
//! [metric]
//! signature = +---
//! coframe1 = sqrt(1 - 2*M/r) * d t
//! coframe2 = r * d th
//! ```
//!
//! `#` starts a comment. Ranges use `<`, `>`, `<=`, `>=`, either one-sided
//! (`M > 0`) or chained (`1/2 < H < 2`), and may refer to parameters and
//! other coordinates. A coframe row must be linear in the differentials
//! `d <coord>`; row `K` is the frame one-form with index `K − 1`.
//! Comments are not preserved by [`MetricSpec::to_gmet`].

use std::collections::BTreeSet;
use std::fmt;

use gf_core::{Chart, ChartRef, Coframe, CoreError, FrameMetric, Geometry, OrdForm};
use gf_symexpr::{differential_symbol, parse_with, Domain, Expr, ParseError, ParseOptions};
use thiserror::Error;

pub const HEADER: &str = "gmet 1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GmetError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown coordinate `{name}`")]
    UnknownCoordinate { line: usize, column: usize, name: String },
    #[error("non-invertible coframe: {0}")]
    Degenerate(String),
    #[error("invalid metric: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl GmetError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        GmetError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn from_parse(e: ParseError, line: usize, offset: usize) -> Self {
        let e = e.relocate(line, offset);
        match e.message.strip_prefix("unknown coordinate `").and_then(|s| s.strip_suffix('`')) {
            Some(name) => GmetError::UnknownCoordinate {
                line: e.line,
                column: e.column,
                name: name.to_string(),
            },
            None => GmetError::syntax(e.line, e.column, e.message),
        }
    }

    /// `(line, column)` for positioned errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            GmetError::Syntax { line, column, .. } | GmetError::UnknownCoordinate { line, column, .. } => {
                Some((*line, *column))
            }
            _ => None,
        }
    }
}

impl From<CoreError> for GmetError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateCoframe(m) => GmetError::Degenerate(m),
            other => GmetError::Invalid(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Vacuum,
    NonVacuum,
    Flat,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Vacuum => "vacuum",
            Classification::NonVacuum => "nonVacuum",
            Classification::Flat => "flat",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vacuum" => Some(Classification::Vacuum),
            "nonVacuum" => Some(Classification::NonVacuum),
            "flat" => Some(Classification::Flat),
            _ => None,
        }
    }

    /// Ricci flat, which includes flat.
    pub fn ricci_flat(self) -> bool {
        self != Classification::NonVacuum
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub value: Expr,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assumption {
    pub symbol: String,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoframeTerm {
    /// index into `coords`
    pub coord: usize,
    pub coeff: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    pub expect: Classification,
    pub notes: Vec<String>,
    pub coords: Vec<String>,
    pub params: Vec<String>,
    /// coordinate ranges first, then parameters, each in declaration order
    pub assumptions: Vec<Assumption>,
    pub signature: String,
    pub coframe: Vec<Vec<CoframeTerm>>,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `key = value` with the value's column offset inside the line.
fn key_value<'a>(line: &Line<'a>) -> Option<(&'a str, &'a str, usize)> {
    let eq = line.text.find('=')?;
    let key = line.text[..eq].trim();
    let rest = &line.text[eq + 1..];
    let lead = rest.len() - rest.trim_start().len();
    Some((key, rest.trim(), line.text[..eq + 1 + lead].chars().count()))
}

#[derive(Clone, Copy, PartialEq)]
enum Cmp {
    Less { strict: bool },
    Greater { strict: bool },
}

/// A range line before its bound expressions are parsed.
struct PendingRange<'a> {
    line: usize,
    symbol: String,
    lower: Option<(&'a str, usize, bool)>,
    upper: Option<(&'a str, usize, bool)>,
}

/// Split at comparison operators, keeping the column offset of each piece.
fn split_comparisons(text: &str) -> (Vec<(&str, usize)>, Vec<Cmp>) {
    let mut pieces = Vec::new();
    let mut ops = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'<' || c == b'>' {
            let strict = bytes.get(i + 1) != Some(&b'=');
            pieces.push(&text[start..i]);
            ops.push(if c == b'<' { Cmp::Less { strict } } else { Cmp::Greater { strict } });
            i += if strict { 1 } else { 2 };
            start = i;
        } else {
            i += 1;
        }
    }
    pieces.push(&text[start..]);
    let located = pieces
        .into_iter()
        .map(|p| {
            let offset = p.as_ptr() as usize - text.as_ptr() as usize;
            let lead = p.len() - p.trim_start().len();
            (p.trim(), text[..offset + lead].chars().count())
        })
        .collect();
    (located, ops)
}

/// `in_chart` selects coordinate ranges; otherwise the symbol is a parameter.
fn parse_range<'a>(line: &Line<'a>, may_name: &dyn Fn(&str) -> bool, in_chart: bool) -> Result<PendingRange<'a>, GmetError> {
    let not_allowed = |name: &str, col: usize| {
        if in_chart {
            GmetError::UnknownCoordinate {
                line: line.number,
                column: col + 1,
                name: name.to_string(),
            }
        } else {
            GmetError::syntax(line.number, col + 1, format!("`{name}` is a coordinate; give its range under [chart]"))
        }
    };
    let (pieces, ops) = split_comparisons(line.text);
    let bad = || GmetError::syntax(line.number, 1, "expected a range such as `M > 0` or `0 < r < 10`");
    let mut pending = PendingRange {
        line: line.number,
        symbol: String::new(),
        lower: None,
        upper: None,
    };
    let piece = |k: usize| (pieces[k].0, pieces[k].1);
    match ops.as_slice() {
        [op] => {
            let (left, right) = (pieces[0].0, pieces[1].0);
            let (symbol_on_left, op) = if is_ident(left) && may_name(left) {
                (true, *op)
            } else if is_ident(right) && may_name(right) {
                // `a < s` reads as `s > a`
                let flipped = match *op {
                    Cmp::Less { strict } => Cmp::Greater { strict },
                    Cmp::Greater { strict } => Cmp::Less { strict },
                };
                (false, flipped)
            } else {
                let (name, col) = if is_ident(left) { piece(0) } else { piece(1) };
                return Err(if is_ident(name) { not_allowed(name, col) } else { bad() });
            };
            let (sym, other) = if symbol_on_left { (piece(0), piece(1)) } else { (piece(1), piece(0)) };
            pending.symbol = sym.0.to_string();
            match op {
                Cmp::Less { strict } => pending.upper = Some((other.0, other.1, strict)),
                Cmp::Greater { strict } => pending.lower = Some((other.0, other.1, strict)),
            }
        }
        [a, b] => {
            let (name, col) = piece(1);
            if !is_ident(name) {
                return Err(bad());
            }
            if !may_name(name) {
                return Err(not_allowed(name, col));
            }
            pending.symbol = name.to_string();
            match (*a, *b) {
                (Cmp::Less { strict: s1 }, Cmp::Less { strict: s2 }) => {
                    pending.lower = Some((pieces[0].0, pieces[0].1, s1));
                    pending.upper = Some((pieces[2].0, pieces[2].1, s2));
                }
                (Cmp::Greater { strict: s1 }, Cmp::Greater { strict: s2 }) => {
                    pending.upper = Some((pieces[0].0, pieces[0].1, s1));
                    pending.lower = Some((pieces[2].0, pieces[2].1, s2));
                }
                _ => return Err(GmetError::syntax(line.number, 1, "chained comparisons must point the same way")),
            }
        }
        _ => return Err(bad()),
    }
    for (text, col, _) in pending.lower.iter().chain(pending.upper.iter()) {
        if text.is_empty() {
            return Err(GmetError::syntax(line.number, col + 1, "missing bound"));
        }
    }
    Ok(pending)
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Top,
    Chart,
    Params,
    Metric,
}

/// Parse the text of a `.gmet` file and check that its coframe is invertible.
pub fn parse_metric(src: &str) -> Result<MetricSpec, GmetError> {
    let lines: Vec<Line> = src
        .lines()
        .enumerate()
        .map(|(k, raw)| Line {
            number: k + 1,
            text: raw.split('#').next().unwrap_or("").trim_end(),
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let mut it = lines.iter();
    match it.next() {
        Some(l) if l.text.trim() == HEADER => {}
        Some(l) if l.text.trim().starts_with("gmet") => {
            return Err(GmetError::syntax(l.number, 1, format!("unsupported version; expected `{HEADER}`")))
        }
        Some(l) => return Err(GmetError::syntax(l.number, 1, format!("expected header `{HEADER}`"))),
        None => return Err(GmetError::syntax(1, 1, "empty metric file")),
    }

    let mut section = Section::Top;
    let mut seen = BTreeSet::new();
    let mut name: Option<String> = None;
    let mut expect: Option<Classification> = None;
    let mut notes = Vec::new();
    let mut coords: Option<(Vec<String>, usize)> = None;
    let mut chart_ranges: Vec<&Line> = Vec::new();
    let mut param_lines: Vec<&Line> = Vec::new();
    let mut signature: Option<(String, usize)> = None;
    let mut rows: Vec<(usize, &Line, &str, usize)> = Vec::new();

    for line in it {
        let trimmed = line.text.trim();
        if let Some(inner) = trimmed.strip_prefix('[') {
            let Some(title) = inner.strip_suffix(']') else {
                return Err(GmetError::syntax(line.number, 1, "unterminated section header"));
            };
            section = match title.trim() {
                "chart" => Section::Chart,
                "params" => Section::Params,
                "metric" => Section::Metric,
                other => return Err(GmetError::syntax(line.number, 2, format!("unknown section `{other}`"))),
            };
            if !seen.insert(title.trim().to_string()) {
                return Err(GmetError::syntax(line.number, 1, format!("section `{}` repeated", title.trim())));
            }
            continue;
        }
        let is_range = trimmed.contains('<') || trimmed.contains('>');
        match section {
            Section::Top => {
                let (key, value, _) =
                    key_value(line).ok_or_else(|| GmetError::syntax(line.number, 1, "expected `key = value`"))?;
                match key {
                    "name" => name = Some(value.to_string()),
                    "expect" => {
                        expect = Some(Classification::parse(value).ok_or_else(|| {
                            GmetError::syntax(line.number, 1, format!("unknown classification `{value}`"))
                        })?)
                    }
                    "note" => notes.push(value.to_string()),
                    other => return Err(GmetError::syntax(line.number, 1, format!("unknown key `{other}`"))),
                }
            }
            Section::Chart if is_range => chart_ranges.push(line),
            Section::Chart => {
                let (key, value, offset) =
                    key_value(line).ok_or_else(|| GmetError::syntax(line.number, 1, "expected `coords = ...`"))?;
                if key != "coords" {
                    return Err(GmetError::syntax(line.number, 1, format!("unknown key `{key}`")));
                }
                let list: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                if let Some(bad) = list.iter().find(|s| !is_ident(s) || s.as_str() == "d" || s.as_str() == "i") {
                    return Err(GmetError::syntax(line.number, offset + 1, format!("invalid coordinate name `{bad}`")));
                }
                coords = Some((list, line.number));
            }
            Section::Params => param_lines.push(line),
            Section::Metric => {
                let (key, value, offset) =
                    key_value(line).ok_or_else(|| GmetError::syntax(line.number, 1, "expected `key = value`"))?;
                if key == "signature" {
                    signature = Some((value.to_string(), line.number));
                } else if let Some(k) = key.strip_prefix("coframe").and_then(|k| k.parse::<usize>().ok()) {
                    rows.push((k, line, value, offset));
                } else {
                    return Err(GmetError::syntax(line.number, 1, format!("unknown key `{key}`")));
                }
            }
        }
    }

    let last = lines.last().map_or(1, |l| l.number);
    let name = name.ok_or_else(|| GmetError::syntax(last, 1, "missing `name`"))?;
    let expect = expect.ok_or_else(|| GmetError::syntax(last, 1, "missing `expect`"))?;
    let (coords, coords_line) = coords.ok_or_else(|| GmetError::syntax(last, 1, "missing `[chart]` coords"))?;
    let coord_set: BTreeSet<String> = coords.iter().cloned().collect();
    if coord_set.len() != coords.len() {
        return Err(GmetError::syntax(coords_line, 1, "duplicate coordinate"));
    }

    let mut params: Vec<String> = Vec::new();
    let mut param_ranges = Vec::new();
    for line in param_lines {
        let trimmed = line.text.trim();
        let symbol = if trimmed.contains('<') || trimmed.contains('>') {
            let r = parse_range(line, &|s| !coord_set.contains(s), false)?;
            let s = r.symbol.clone();
            param_ranges.push(r);
            s
        } else if is_ident(trimmed) && !coord_set.contains(trimmed) {
            trimmed.to_string()
        } else {
            return Err(GmetError::syntax(line.number, 1, "expected a parameter name or range"));
        };
        if !params.contains(&symbol) {
            params.push(symbol);
        }
    }
    let mut ranges = Vec::new();
    for line in chart_ranges {
        ranges.push(parse_range(line, &|s| coord_set.contains(s), true)?);
    }
    ranges.extend(param_ranges);

    let mut known = coord_set.clone();
    known.extend(params.iter().cloned());
    let scalar_opts = ParseOptions {
        known: Some(&known),
        differentials: false,
        coords: None,
    };
    let mut assumptions = Vec::new();
    for r in ranges {
        let bound = |b: Option<(&str, usize, bool)>| -> Result<Option<Bound>, GmetError> {
            b.map(|(text, col, strict)| {
                let z = parse_with(text, &scalar_opts).map_err(|e| GmetError::from_parse(e, r.line, col))?;
                if !z.is_real() {
                    return Err(GmetError::syntax(r.line, col + 1, "bounds must be real"));
                }
                Ok(Bound { value: z.re, strict })
            })
            .transpose()
        };
        assumptions.push(Assumption {
            symbol: r.symbol.clone(),
            lower: bound(r.lower)?,
            upper: bound(r.upper)?,
        });
    }

    let (signature, sig_line) = signature.ok_or_else(|| GmetError::syntax(last, 1, "missing `signature`"))?;
    FrameMetric::parse(&signature).map_err(|e| GmetError::syntax(sig_line, 1, e.to_string()))?;
    if signature.trim().len() != coords.len() {
        return Err(GmetError::syntax(
            sig_line,
            1,
            format!("signature has {} entries for {} coordinates", signature.trim().len(), coords.len()),
        ));
    }

    let row_opts = ParseOptions {
        known: Some(&known),
        differentials: true,
        coords: Some(&coord_set),
    };
    let mut coframe: Vec<Option<Vec<CoframeTerm>>> = vec![None; coords.len()];
    for (k, line, value, offset) in rows {
        if k == 0 || k > coords.len() {
            return Err(GmetError::syntax(
                line.number,
                1,
                format!("coframe index {k} outside 1..={}", coords.len()),
            ));
        }
        if coframe[k - 1].is_some() {
            return Err(GmetError::syntax(line.number, 1, format!("coframe{k} given twice")));
        }
        let z = parse_with(value, &row_opts).map_err(|e| GmetError::from_parse(e, line.number, offset))?;
        if !z.is_real() {
            return Err(GmetError::syntax(line.number, offset + 1, "coframe coefficients must be real"));
        }
        coframe[k - 1] = Some(linear_terms(&z.re, &coords).ok_or_else(|| {
            GmetError::syntax(line.number, offset + 1, "coframe row must be a sum of terms `<expr> * d <coord>`")
        })?);
    }
    let coframe = coframe
        .into_iter()
        .enumerate()
        .map(|(k, row)| row.ok_or_else(|| GmetError::syntax(last, 1, format!("missing coframe{}", k + 1))))
        .collect::<Result<Vec<_>, _>>()?;

    let spec = MetricSpec {
        name,
        expect,
        notes,
        coords,
        params,
        assumptions,
        signature: signature.trim().to_string(),
        coframe,
    };
    spec.coframe_forms()?;
    Ok(spec)
}

/// Coefficients of `d <coord>` in a row that is linear in them.
fn linear_terms(row: &Expr, coords: &[String]) -> Option<Vec<CoframeTerm>> {
    let diffs: Vec<String> = coords.iter().map(|c| differential_symbol(c)).collect();
    let mut rest = row.clone();
    let mut terms = Vec::new();
    for (k, ds) in diffs.iter().enumerate() {
        let coeff = row.diff(ds);
        if coeff.symbols().iter().any(|s| diffs.contains(s)) {
            return None;
        }
        rest = rest - &coeff * &Expr::symbol(ds);
        if !coeff.is_zero() {
            terms.push(CoframeTerm { coord: k, coeff });
        }
    }
    rest.is_zero().then_some(terms)
}

fn write_bound(out: &mut String, b: &Bound, less: bool) {
    let op = match (less, b.strict) {
        (true, true) => "<",
        (true, false) => "<=",
        (false, true) => ">",
        (false, false) => ">=",
    };
    out.push_str(&format!(" {op} {}", b.value));
}

fn write_assumption(out: &mut String, a: &Assumption) {
    match (&a.lower, &a.upper) {
        (Some(lo), Some(hi)) => {
            out.push_str(&lo.value.to_string());
            out.push_str(if lo.strict { " < " } else { " <= " });
            out.push_str(&a.symbol);
            write_bound(out, hi, true);
        }
        (Some(lo), None) => {
            out.push_str(&a.symbol);
            write_bound(out, lo, false);
        }
        (None, Some(hi)) => {
            out.push_str(&a.symbol);
            write_bound(out, hi, true);
        }
        (None, None) => out.push_str(&a.symbol),
    }
    out.push('\n');
}

fn simple_text(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MetricSpec {
    pub fn to_gmet(&self) -> String {
        let mut out = format!("{HEADER}\nname = {}\nexpect = {}\n", self.name, self.expect);
        for n in &self.notes {
            out.push_str(&format!("note = {n}\n"));
        }
        out.push_str(&format!("\n[chart]\ncoords = {}\n", self.coords.join(", ")));
        for a in self.assumptions.iter().filter(|a| self.coords.contains(&a.symbol)) {
            write_assumption(&mut out, a);
        }
        if !self.params.is_empty() {
            out.push_str("\n[params]\n");
            for p in &self.params {
                let mut any = false;
                for a in self.assumptions.iter().filter(|a| &a.symbol == p) {
                    write_assumption(&mut out, a);
                    any = true;
                }
                if !any {
                    out.push_str(&format!("{p}\n"));
                }
            }
        }
        out.push_str(&format!("\n[metric]\nsignature = {}\n", self.signature));
        for (k, row) in self.coframe.iter().enumerate() {
            let terms: Vec<String> = row
                .iter()
                .map(|t| {
                    let c = t.coeff.to_string();
                    let coord = &self.coords[t.coord];
                    if t.coeff.is_one() {
                        format!("d {coord}")
                    } else if simple_text(&c) {
                        format!("{c} * d {coord}")
                    } else {
                        format!("({c}) * d {coord}")
                    }
                })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            out.push_str(&format!("coframe{} = {body}\n", k + 1));
        }
        out
    }

    pub fn frame_metric(&self) -> Result<FrameMetric, GmetError> {
        Ok(FrameMetric::parse(&self.signature)?)
    }

    pub fn domain(&self) -> Domain {
        let mut d = Domain::new();
        for a in &self.assumptions {
            d.add_range(
                &a.symbol,
                a.lower.as_ref().map(|b| b.value.clone()),
                a.upper.as_ref().map(|b| b.value.clone()),
            );
        }
        d
    }

    pub fn chart(&self) -> Result<ChartRef, GmetError> {
        Ok(Chart::with_domain(self.coords.clone(), self.params.clone(), self.domain())?)
    }

    fn coframe_forms(&self) -> Result<Coframe, GmetError> {
        let chart = self.chart()?;
        let forms = self
            .coframe
            .iter()
            .map(|row| {
                row.iter().fold(OrdForm::zero(&chart, 1), |acc, t| {
                    acc + OrdForm::dx(&chart, t.coord).scale_real(&t.coeff)
                })
            })
            .collect();
        Ok(Coframe::new(forms)?)
    }

    pub fn coframe(&self) -> Result<Coframe, GmetError> {
        self.coframe_forms()
    }

    /// Coframe, frame metric, Levi-Civita connection and curvature.
    pub fn geometry(&self) -> Result<Geometry, GmetError> {
        Ok(Geometry::new(self.coframe()?, self.frame_metric()?)?)
    }
}
