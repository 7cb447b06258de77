//! Batch front end. A [`JobSpec`] names a command and a source (a JSON
//! bialgebra document or a built-in), [`run`] executes it and
//! [`render_report`] turns the [`Report`] into deterministic text or JSON.
//!
//! The JSON layout is described in `docs/report_schema.md`.

use std::fmt;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args as ClapArgs, Parser, ValueEnum};
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::bialgebra::{
    builtin, BracketTensor, CocommutatorTensor, LieBialgebra, LieTensor2, LieVector, Residual,
    ValidationReport,
};
use crate::closedform::{ClosedForm, Recognized};
use crate::double::{
    build_double, build_family, canonical_cocommutator_gl, check_pairing_invariance, is_self_dual,
    su2_t1_j_basis, to_hfi_basis, DoubleFamily, DoubleFamilySpec, DrinfeldDouble,
};
use crate::error::{Error, Result};
use crate::quantize::{extract_delta, quantize, seeded_scramble, FriedrichsFrame, QuantizationResult};
use crate::scalars::{AlgebraicScalar, ZSeries};
use crate::uea::{CommutatorTable, PbwMonomial, UeaElement};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_NAME: &str = "bialg";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_ORDER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Double,
    Quantize,
    Primitivize,
    Recognize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Where the bialgebra comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Source {
    Input(PathBuf),
    Builtin(String),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Input(p) => write!(f, "input:{}", p.display()),
            Source::Builtin(b) => write!(f, "builtin:{b}"),
        }
    }
}

/// A recognized built-in name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Su2,
    Family(DoubleFamilySpec),
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su2" => Ok(Builtin::Su2),
            "su2+t1" => Ok(Builtin::Family(DoubleFamilySpec::su2_t1())),
            _ if s.starts_with("gl:") => Ok(Builtin::Family(s.parse()?)),
            _ => Err(Error::UnknownBuiltin(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JobSpec {
    pub command: Command,
    pub source: Source,
    pub order: u32,
    pub degree: u32,
    pub format: Format,
    pub seed: u64,
    /// Adds wall-clock timing to the report, which then is no longer
    /// reproducible byte for byte.
    pub timing: bool,
}

impl JobSpec {
    /// Defaults: `K = 4`, `D = K + 2`, text, seed 0, no timing.
    pub fn new(command: Command, source: Source) -> Self {
        Self {
            command,
            source,
            order: DEFAULT_ORDER,
            degree: DEFAULT_ORDER + 2,
            format: Format::Text,
            seed: 0,
            timing: false,
        }
    }

    pub fn builtin(command: Command, name: &str) -> Self {
        Self::new(command, Source::Builtin(name.to_string()))
    }

    /// Sets `K` and the default `D = K + 2`.
    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self.degree = order + 2;
        self
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < self.order + 1 {
            return Err(Error::InvalidJob(format!(
                "degree cap {} is below order + 1 = {}",
                self.degree,
                self.order + 1
            )));
        }
        if let Source::Builtin(name) = &self.source {
            name.parse::<Builtin>()?;
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "bialg", version, about = "Lie bialgebras, Drinfeld doubles and their quantization")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Highest z-order K.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: u32,
    /// Ansatz degree cap D (default K + 2; also the weight limit of `primitivize`).
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the `primitivize` scramble.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, ClapArgs)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Bialgebra JSON document.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// One of `su2`, `su2+t1`, `gl:N`.
    #[arg(long)]
    pub builtin: Option<String>,
}

impl Args {
    pub fn job(&self) -> JobSpec {
        let source = match (&self.source.input, &self.source.builtin) {
            (Some(p), _) => Source::Input(p.clone()),
            (None, Some(b)) => Source::Builtin(b.clone()),
            (None, None) => unreachable!("clap requires a source"),
        };
        JobSpec {
            command: self.command,
            source,
            order: self.order,
            degree: self.degree.unwrap_or(self.order + 2),
            format: self.format,
            seed: self.seed,
            timing: self.timing,
        }
    }
}

/// Exit status for a failed job: 1 when the computation or a check failed,
/// 2 when the input itself is unusable.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::UnknownBuiltin(_)
        | Error::UnknownGenerator(_)
        | Error::DuplicateEntry(_)
        | Error::ScalarParse { .. }
        | Error::Io(_)
        | Error::InvalidJob(_)
        | Error::InvalidBialgebra(_)
        | Error::UnsupportedFamily(_) => 2,
        _ => 1,
    }
}

// ---------------------------------------------------------------- parsing

/// A JSON object read as an ordered list, so repeated keys stay visible.
struct Entries<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V2<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V2<V> {
            type Value = Entries<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, V>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V2(PhantomData))
    }
}

impl<V> Default for Entries<V> {
    fn default() -> Self {
        Entries(Vec::new())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    generators: Vec<String>,
    #[serde(default)]
    brackets: Entries<Entries<String>>,
    #[serde(default)]
    cocommutator: Entries<Entries<String>>,
}

/// 1-based line and column of the first `"needle"` in `text`.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let quoted = format!("\"{needle}\"");
    let Some(offset) = text.find(&quoted) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_error(text: &str, needle: &str, message: String) -> Error {
    let (line, column) = locate(text, needle);
    Error::Parse { line, column, message }
}

fn check_unique<V>(text: &str, entries: &Entries<V>, what: &str) -> Result<()> {
    for (i, (k, _)) in entries.0.iter().enumerate() {
        if entries.0[..i].iter().any(|(prev, _)| prev == k) {
            let _ = text;
            return Err(Error::DuplicateEntry(format!("{what} `{k}`")));
        }
    }
    Ok(())
}

struct Names<'a> {
    names: &'a [String],
    text: &'a str,
}

impl Names<'_> {
    fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// `"A,B"` as an ordered pair of distinct generators.
    fn pair(&self, key: &str) -> Result<(usize, usize)> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != 2 || parts.iter().any(|p| p.is_empty()) {
            return Err(parse_error(self.text, key, format!("expected a key `A,B`, found `{key}`")));
        }
        let (a, b) = (self.index(parts[0])?, self.index(parts[1])?);
        if a == b {
            return Err(parse_error(self.text, key, format!("pair `{key}` repeats a generator")));
        }
        Ok((a, b))
    }
}

fn scalar(text: &str) -> Result<AlgebraicScalar> {
    text.parse()
}

/// Builds a bialgebra from a JSON document
/// `{"generators": [...], "brackets": {"A,B": {"C": "s"}}, "cocommutator": {"A": {"B,C": "s"}}}`.
///
/// `"A,B": {"C": s}` adds `s·C` to `[A, B]`; `"A": {"B,C": s}` adds `s·B∧C`
/// to `δ(A)`. Either orientation of a pair is accepted and the value is read
/// in that orientation, but a pair may appear only once. Validation is not
/// run here.
pub fn parse_bialgebra_str(text: &str) -> Result<LieBialgebra> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.generators.is_empty() {
        return Err(parse_error(text, "generators", "the generator list is empty".into()));
    }
    for (i, g) in doc.generators.iter().enumerate() {
        if g.trim().is_empty() || g.contains(',') {
            return Err(parse_error(text, g, format!("invalid generator name `{g}`")));
        }
        if doc.generators[..i].contains(g) {
            return Err(Error::DuplicateEntry(format!("generator `{g}`")));
        }
    }
    let names = Names {
        names: &doc.generators,
        text,
    };
    let n = doc.generators.len();

    let mut f = BracketTensor::new(n);
    check_unique(text, &doc.brackets, "bracket")?;
    let mut seen = std::collections::BTreeSet::new();
    for (key, image) in &doc.brackets.0 {
        let (p, q) = names.pair(key)?;
        if !seen.insert((p.min(q), p.max(q))) {
            return Err(Error::DuplicateEntry(format!("bracket `{key}`")));
        }
        check_unique(text, image, &format!("term in bracket `{key}`"))?;
        for (target, value) in &image.0 {
            f.add(p, q, names.index(target)?, &scalar(value)?);
        }
    }

    let mut c = CocommutatorTensor::new(n);
    check_unique(text, &doc.cocommutator, "cocommutator")?;
    for (source, image) in &doc.cocommutator.0 {
        let p = names.index(source)?;
        let mut seen = std::collections::BTreeSet::new();
        for (key, value) in &image.0 {
            let (q, r) = names.pair(key)?;
            if !seen.insert((q.min(r), q.max(r))) {
                return Err(Error::DuplicateEntry(format!("wedge `{key}` in the cocommutator of `{source}`")));
            }
            c.add_wedge(p, q, r, &scalar(value)?);
        }
    }
    LieBialgebra::new(&doc.generators, f, c)
}

pub fn parse_bialgebra_file(path: &Path) -> Result<LieBialgebra> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Io(format!("{}: not UTF-8", path.display())))?;
    parse_bialgebra_str(&text)
}

// ---------------------------------------------------------------- rendering helpers

fn vector_element(n: usize, v: &LieVector) -> UeaElement {
    let mut e = UeaElement::zero(n, 0);
    for (k, c) in v {
        e.add_term(PbwMonomial::generator(n, *k), &ZSeries::constant(c.clone(), 0));
    }
    e
}

fn render_vector(names: &[&str], v: &LieVector) -> String {
    vector_element(names.len(), v).render(names)
}

fn coefficient(c: &AlgebraicScalar) -> String {
    if c.is_one() {
        String::new()
    } else {
        format!("({c}) ")
    }
}

fn render_wedges(names: &[&str], w: &std::collections::BTreeMap<(usize, usize), AlgebraicScalar>) -> String {
    if w.is_empty() {
        return "0".into();
    }
    w.iter()
        .map(|((q, r), c)| format!("{}{} /\\ {}", coefficient(c), names[*q], names[*r]))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_tensor2(names: &[&str], t: &LieTensor2) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter()
        .map(|((q, r), c)| format!("{}{} (x) {}", coefficient(c), names[*q], names[*r]))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_residual(names: &[&str], r: &Residual) -> String {
    match r {
        Residual::Vector(v) => render_vector(names, v),
        Residual::Tensor(t) => render_tensor2(names, t),
        Residual::Scalar(s) => s.to_string(),
    }
}

fn index_names(names: &[&str], indices: &[usize]) -> Vec<String> {
    indices
        .iter()
        .map(|i| names.get(*i).map_or_else(|| i.to_string(), |s| s.to_string()))
        .collect()
}

fn check_json(names: &[&str], r: &ValidationReport) -> Value {
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| {
            json!({
                "indices": index_names(names, &f.indices),
                "residual": render_residual(names, &f.residual),
            })
        })
        .collect();
    json!({ "check": r.check, "passed": r.passed, "failures": failures })
}

fn check_lines(names: &[&str], r: &ValidationReport) -> Vec<String> {
    let mut out = vec![format!("check {}: {}", r.check, verdict(r.passed))];
    for f in &r.failures {
        out.push(format!(
            "  ({}): {}",
            index_names(names, &f.indices).join(", "),
            render_residual(names, &f.residual)
        ));
    }
    out
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn structure_json(g: &LieBialgebra) -> Value {
    let names = g.names();
    let n = g.dim();
    let mut brackets = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let v = g.brackets().bracket(p, q);
            if !v.is_empty() {
                brackets.push(json!({ "pair": [names[p], names[q]], "value": render_vector(&names, &v) }));
            }
        }
    }
    let cocommutators: Vec<Value> = (0..n)
        .map(|p| json!({ "generator": names[p], "value": render_wedges(&names, &g.cocommutators().wedges(p)) }))
        .collect();
    json!({ "generators": names, "brackets": brackets, "cocommutators": cocommutators })
}

fn structure_lines(g: &LieBialgebra) -> Vec<String> {
    let names = g.names();
    let n = g.dim();
    let mut out = vec![format!("generators: {}", names.join(", ")), "brackets:".to_string()];
    for p in 0..n {
        for q in p + 1..n {
            let v = g.brackets().bracket(p, q);
            if !v.is_empty() {
                out.push(format!("  [{}, {}] = {}", names[p], names[q], render_vector(&names, &v)));
            }
        }
    }
    out.push("cocommutators:".into());
    for p in 0..n {
        out.push(format!("  delta({}) = {}", names[p], render_wedges(&names, &g.cocommutators().wedges(p))));
    }
    out
}

// ---------------------------------------------------------------- reports

/// Outcome of one job: a verdict plus the same content as text lines and as
/// a JSON value.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub job: JobSpec,
    pub passed: bool,
    pub lines: Vec<String>,
    pub result: Value,
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Text or pretty JSON, newline terminated. Identical reports give identical
/// bytes.
pub fn render_report(r: &Report, format: Format) -> Vec<u8> {
    let status = if r.passed { "pass" } else { "fail" };
    match format {
        Format::Json => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "engine": { "name": ENGINE_NAME, "version": ENGINE_VERSION },
                "job": r.job,
                "status": status,
                "result": r.result,
            });
            if let Some(ms) = r.timing_ms {
                doc["timing_ms"] = json!(ms);
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => {
            let j = &r.job;
            let mut out = format!(
                "{ENGINE_NAME} {ENGINE_VERSION} (report schema {SCHEMA_VERSION})\n\
                 job: {} source={} order={} degree={} seed={}\nstatus: {status}\n",
                serde_json::to_value(j.command).expect("enum").as_str().unwrap_or_default(),
                j.source,
                j.order,
                j.degree,
                j.seed
            );
            for l in &r.lines {
                out.push_str(l);
                out.push('\n');
            }
            if let Some(ms) = r.timing_ms {
                out.push_str(&format!("timing_ms: {ms}\n"));
            }
            out.into_bytes()
        }
    }
}

enum Loaded {
    Algebra(LieBialgebra),
    Family(DoubleFamilySpec, DrinfeldDouble),
}

fn load(source: &Source) -> Result<Loaded> {
    match source {
        Source::Input(p) => Ok(Loaded::Algebra(parse_bialgebra_file(p)?)),
        Source::Builtin(name) => match name.parse::<Builtin>()? {
            Builtin::Su2 => Ok(Loaded::Algebra(builtin::su2())),
            Builtin::Family(spec) => Ok(Loaded::Family(spec, build_family(spec)?)),
        },
    }
}

/// The bialgebra a family contributes to quantization: the double in its
/// physical basis (`J3, J+, J-, I` or `H, F, I`).
fn physical_basis(spec: DoubleFamilySpec, d: &DrinfeldDouble) -> Result<LieBialgebra> {
    match spec.family {
        DoubleFamily::Su2T1 => su2_t1_j_basis(d),
        DoubleFamily::GlTn => to_hfi_basis(d),
    }
}

fn algebra(loaded: Loaded) -> Result<LieBialgebra> {
    match loaded {
        Loaded::Algebra(g) => Ok(g),
        Loaded::Family(spec, d) => physical_basis(spec, &d),
    }
}

/// Runs one job. Check failures give a failing report; errors are returned
/// as such (see [`exit_code`]).
pub fn run(job: &JobSpec) -> Result<Report> {
    job.validate()?;
    let start = Instant::now();
    let loaded = load(&job.source)?;
    let (passed, lines, result) = match job.command {
        Command::Validate => run_validate(loaded),
        Command::Double => run_double(loaded)?,
        Command::Quantize => run_quantize(job, algebra(loaded)?, false)?,
        Command::Recognize => run_quantize(job, algebra(loaded)?, true)?,
        Command::Primitivize => run_primitivize(job, algebra(loaded)?)?,
    };
    Ok(Report {
        job: job.clone(),
        passed,
        lines,
        result,
        timing_ms: job.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

type Body = (bool, Vec<String>, Value);

fn run_validate(loaded: Loaded) -> Body {
    match loaded {
        Loaded::Algebra(g) => {
            let names = g.names();
            let reports = g.reports();
            let passed = reports.iter().all(|r| r.passed);
            let lines = reports.iter().flat_map(|r| check_lines(&names, r)).collect();
            let checks: Vec<Value> = reports.iter().map(|r| check_json(&names, r)).collect();
            (passed, lines, json!({ "generators": names, "checks": checks }))
        }
        Loaded::Family(spec, d) => {
            let (passed, mut lines, mut result) = double_checks(Some(spec), &d);
            lines.insert(0, format!("family: {spec}"));
            result["family"] = json!(spec.to_string());
            (passed, lines, result)
        }
    }
}

/// Axiom checks, pairing invariance and self-duality of a double; for a
/// `gl` family also the comparison with the canonical cocommutator.
fn double_checks(spec: Option<DoubleFamilySpec>, d: &DrinfeldDouble) -> Body {
    let names = d.full.names();
    let mut reports: Vec<ValidationReport> = d.full.reports().into();
    reports.push(check_pairing_invariance(d));
    let self_dual = is_self_dual(d);
    let mut passed = reports.iter().all(|r| r.passed);
    let mut lines: Vec<String> = reports.iter().flat_map(|r| check_lines(&names, r)).collect();
    lines.push(format!("self_dual: {self_dual}"));
    let mut result = json!({
        "generators": names,
        "checks": reports.iter().map(|r| check_json(&names, r)).collect::<Vec<_>>(),
        "self_dual": self_dual,
    });
    if let Some(spec) = spec.filter(|s| s.family == DoubleFamily::GlTn) {
        let canonical = to_hfi_basis(d)
            .map(|h| *h.cocommutators() == canonical_cocommutator_gl(spec.n))
            .unwrap_or(false);
        passed &= canonical;
        lines.push(format!("canonical_cocommutator: {}", verdict(canonical)));
        result["canonical_cocommutator"] = json!(canonical);
    }
    (passed, lines, result)
}

fn run_double(loaded: Loaded) -> Result<Body> {
    let (spec, d) = match loaded {
        Loaded::Algebra(g) => (None, build_double(&g)?),
        Loaded::Family(spec, d) => (Some(spec), d),
    };
    let names = d.full.names();
    let n = d.n();
    let mut pairing = Vec::new();
    let mut pairing_lines = vec!["pairing:".to_string()];
    for p in 0..n {
        for q in 0..n {
            let v = &d.pairing[p][q];
            if !v.is_zero() {
                pairing.push(json!({ "pair": [names[p], names[n + q]], "value": v.to_string() }));
                pairing_lines.push(format!("  <{}, {}> = {v}", names[p], names[n + q]));
            }
        }
    }
    let (passed, checks, check_result) = double_checks(spec, &d);
    let mut lines = structure_lines(&d.full);
    lines.extend(pairing_lines);
    lines.extend(checks);
    let mut result = structure_json(&d.full);
    result["pairing"] = json!(pairing);
    for (k, v) in check_result.as_object().expect("object") {
        result[k] = v.clone();
    }
    if let Some(spec) = spec {
        lines.insert(0, format!("family: {spec}"));
        result["family"] = json!(spec.to_string());
    }
    Ok((passed, lines, result))
}

fn closed_form_json(names: &[&str], f: &ClosedForm) -> Value {
    json!({
        "pattern": f.pattern.name(),
        "rate": f.rate.to_string(),
        "argument": f.argument.map(|a| names[a]),
        "verified_order": f.verified_order,
    })
}

fn recognized_section(names: &[&str], rec: &Recognized) -> (Vec<String>, Value) {
    let mut lines = vec!["closed forms:".to_string()];
    let mut coproducts = Vec::new();
    for f in rec.coproducts.values() {
        let text = f.render(names);
        lines.push(format!("  D({}) = {text}", names[f.generator]));
        coproducts.push(json!({
            "generator": names[f.generator],
            "render": text,
            "left": closed_form_json(names, &f.left),
            "right": closed_form_json(names, &f.right),
        }));
    }
    let mut commutators = Vec::new();
    let mut facs: Vec<_> = rec.commutators.values().collect();
    facs.sort_by_key(|f| f.pair);
    for f in facs {
        let (i, j) = f.pair;
        let text = f.render(names);
        lines.push(format!("  [{}, {}] = {text}", names[i], names[j]));
        commutators.push(json!({
            "pair": [names[i], names[j]],
            "render": text,
            "amplitude": f.amplitude.to_string(),
            "factor": closed_form_json(names, &f.factor),
        }));
    }
    (lines, json!({ "coproducts": coproducts, "commutators": commutators }))
}

fn run_quantize(job: &JobSpec, g: LieBialgebra, recognize_only: bool) -> Result<Body> {
    let names = g.names();
    let reports = g.reports();
    if !reports.iter().all(|r| r.passed) {
        let lines = reports.iter().flat_map(|r| check_lines(&names, r)).collect();
        let checks: Vec<Value> = reports.iter().map(|r| check_json(&names, r)).collect();
        return Ok((false, lines, json!({ "generators": names, "checks": checks })));
    }
    let q = quantize(&g, job.order, job.degree)?;
    let (rec_lines, rec_json) = recognized_section(&names, &q.recognized);
    if recognize_only {
        let mut lines = vec![format!("generators: {}", names.join(", "))];
        lines.extend(rec_lines);
        return Ok((true, lines, json!({ "generators": names, "recognized": rec_json })));
    }
    quantization_body(&g, &q, rec_lines, rec_json)
}

fn quantization_body(g: &LieBialgebra, q: &QuantizationResult, rec_lines: Vec<String>, rec_json: Value) -> Result<Body> {
    let names = q.names();
    let n = names.len();
    let k = q.order();
    let mut lines = vec![format!("generators: {}", names.join(", ")), "coproducts:".to_string()];
    let mut coproducts = Vec::new();
    for i in 0..n {
        let mut orders = Vec::new();
        for o in 0..=k {
            let t = q.coproducts.order(i, o).expect("computed order").render(&names);
            lines.push(format!("  D{o}({}) = {t}", names[i]));
            orders.push(t);
        }
        coproducts.push(json!({ "generator": names[i], "orders": orders }));
    }
    lines.push("commutators:".into());
    let mut commutators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = q.commutators.get(i, j).with_truncation(k);
            if e.is_zero() {
                continue;
            }
            let t = e.render(&names);
            lines.push(format!("  [{}, {}] = {t}", names[i], names[j]));
            commutators.push(json!({ "pair": [names[i], names[j]], "value": t }));
        }
    }
    let dims: Vec<String> = q.residual_gauge_dims.iter().map(usize::to_string).collect();
    lines.push(format!("residual_gauge_dims: {}", dims.join(" ")));
    lines.extend(rec_lines);

    let coassoc = q.coassociativity_failures()?;
    let hom = q.homomorphism_failures()?;
    let roundtrip = (k >= 1).then(|| extract_delta(q) == *g.cocommutators());
    let passed = coassoc.is_empty() && hom.is_empty() && roundtrip != Some(false);
    lines.push(format!("check coassociativity: {}", verdict(coassoc.is_empty())));
    lines.push(format!("check homomorphism: {}", verdict(hom.is_empty())));
    lines.push(format!(
        "check delta_roundtrip: {}",
        roundtrip.map_or("skipped (order 0)", verdict)
    ));
    let hom_pairs: Vec<[&str; 2]> = hom.iter().map(|(i, j)| [names[*i], names[*j]]).collect();
    let result = json!({
        "generators": names,
        "order": k,
        "max_degree": q.max_degree,
        "coproducts": coproducts,
        "commutators": commutators,
        "recognized": rec_json,
        "residual_gauge_dims": q.residual_gauge_dims,
        "checks": {
            "coassociativity": { "passed": coassoc.is_empty(), "failing_orders": coassoc },
            "homomorphism": { "passed": hom.is_empty(), "failing_pairs": hom_pairs },
            "delta_roundtrip": { "passed": roundtrip },
        },
    });
    Ok((passed, lines, result))
}

fn run_primitivize(job: &JobSpec, g: LieBialgebra) -> Result<Body> {
    let names = g.names();
    let n = g.dim();
    let limit = job.degree;
    let table = CommutatorTable::classical(g.brackets());
    let scramble = seeded_scramble(n, job.seed);
    let frame = FriedrichsFrame::classical(&table, limit)?;
    let (recovered, log) = frame.primitivize(&scramble)?;
    let exact = (0..n).all(|i| recovered[i] == UeaElement::generator(n, i, limit));
    let primitive = frame.defect(&recovered)?.iter().all(|d| d.is_zero());
    let replay = frame.replay(&scramble, &log)? == recovered;
    let passed = exact && primitive && replay;

    let mut lines = vec![format!("generators: {}", names.join(", ")), format!("weight limit: {limit}"), "scramble:".into()];
    let mut scramble_json = Vec::new();
    for i in 0..n {
        let t = scramble[i].render(&names);
        lines.push(format!("  X[{}] = {t}", names[i]));
        scramble_json.push(json!({ "generator": names[i], "value": t }));
    }
    lines.push("log:".into());
    let log_lines = log.render(&names);
    lines.extend(log_lines.iter().map(|l| format!("  {l}")));
    lines.push("recovered:".into());
    let mut recovered_json = Vec::new();
    for i in 0..n {
        let t = recovered[i].render(&names);
        lines.push(format!("  {} = {t}", names[i]));
        recovered_json.push(json!({ "generator": names[i], "value": t }));
    }
    lines.push(format!("check recovers_generators: {}", verdict(exact)));
    lines.push(format!("check primitive_coproduct: {}", verdict(primitive)));
    lines.push(format!("check log_replay: {}", verdict(replay)));
    let result = json!({
        "generators": names,
        "weight_limit": limit,
        "scramble": scramble_json,
        "log": log_lines,
        "log_entries": log.entries,
        "recovered": recovered_json,
        "checks": {
            "recovers_generators": exact,
            "primitive_coproduct": primitive,
            "log_replay": replay,
        },
    });
    Ok((passed, lines, result))
}

/// Parses arguments already split by clap, runs the job and writes the
/// report. Returns the process exit status.
pub fn main_with(args: &Args) -> i32 {
    let job = args.job();
    let report = match run(&job) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let bytes = render_report(&report, job.format);
    let written = match &args.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {}", Error::Io(e));
        return 2;
    }
    report.exit_code()
}
