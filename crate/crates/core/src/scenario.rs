//! TOML scenarios, check orchestration and reports for the command-line tool.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::cjs11d::{check_fierz, cjs_constraint_residual, field_equation_residuals, CJSScenario, DOrthForm, VolumeForm};
use crate::clifford::{charge_conjugation_beta, eleven_dim_beta, gamma_rep, GammaRep, GammaStyle, Signature, SpinorBilinear};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rational::{format_rational, parse_rational};
use crate::superdomain::{parse_function, Chart, SuperFunction, SuperVectorField};
use crate::superpoincare::{
    bracket_tensor_from_beta, build_super_poincare, check_admissible, extended_inner_matrix, jacobi_check, Sampling,
    SuperPoincareAlgebra,
};
use crate::supergravity::{
    build_flat_spacetime, check_gravity_field, check_levi_civita, check_strong_levi_civita, compute_levi,
    decompose_torsion, extract_physical_fields, CheckReport, Connection, DistributionPair, FrameField, FrameMetric,
};

pub const FORMAT_VERSION: i64 = 1;

/// Checks in dependency order.
pub const CHECKS: [&str; 12] = [
    "gamma",
    "admissible",
    "jacobi",
    "levi",
    "torsion",
    "strong-lc",
    "lc",
    "gravity-field",
    "physical-fields",
    "cjs-constraints",
    "field-equations",
    "fierz",
];

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: i64,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi_sample: Option<usize>,
    pub algebra: AlgebraSection,
    pub chart: ChartSection,
    #[serde(default)]
    pub frame: FrameSection,
    #[serde(default)]
    pub metric: MetricSection,
    #[serde(default)]
    pub connection: EntriesSection,
    #[serde(default)]
    pub flux: EntriesSection,
    #[serde(default)]
    pub orientation: OrientationSection,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    /// `"p,q"`; `q = 1` is read as the time-first Lorentzian signature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<i8>>,
    /// `auto`, `dirac`, `majorana`, `pauli` or `inline`.
    #[serde(default = "default_auto")]
    pub gamma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spinor_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma_entries: Vec<Spanned<String>>,
    /// `eleven-dim`, `charge-conjugation` or `inline`.
    pub beta: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta_entries: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub n: usize,
    pub m: usize,
    pub generators: u32,
    pub max_x_degree: u32,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    /// `flat` (default), `coordinate` or `explicit`.
    #[serde(default = "default_flat")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<Vec<Spanned<String>>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    /// `extended` (default) or `explicit`.
    #[serde(default = "default_extended")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EntriesSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationSection {
    /// `standard` (default), `none` or `lambda`.
    #[serde(default = "default_standard")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Spanned<String>>,
}

impl Default for FrameSection {
    fn default() -> Self {
        FrameSection {
            kind: default_flat(),
            fields: Vec::new(),
        }
    }
}

impl Default for MetricSection {
    fn default() -> Self {
        MetricSection {
            kind: default_extended(),
            entries: Vec::new(),
        }
    }
}

impl Default for OrientationSection {
    fn default() -> Self {
        OrientationSection {
            kind: default_standard(),
            lambda: None,
        }
    }
}

fn default_auto() -> String {
    "auto".into()
}
fn default_flat() -> String {
    "flat".into()
}
fn default_extended() -> String {
    "extended".into()
}
fn default_standard() -> String {
    "standard".into()
}

/// Line and column (1-based) of a byte offset.
fn position(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Rebases errors from text inside a spanned string onto the file.
fn locate(source: &str, span: &Spanned<String>, e: Error) -> Error {
    let (line, column) = position(source, span.span().start + 1);
    match e {
        Error::Parse { column: inner, message, .. } => Error::Parse {
            line,
            column: column + inner.saturating_sub(1),
            message,
        },
        other => Error::Parse {
            line,
            column,
            message: other.to_string(),
        },
    }
}

/// `"a b c = text"` → indices and the right-hand side with its column offset.
fn split_entry<'a>(source: &str, span: &'a Spanned<String>, arity: usize) -> Result<(Vec<usize>, &'a str, usize)> {
    let text = span.get_ref();
    let Some(eq) = text.find('=') else {
        return Err(locate(source, span, Error::parse(format!("entry '{text}' needs '='"))));
    };
    let idx: Vec<usize> = text[..eq]
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| locate(source, span, Error::parse(format!("bad index list in '{text}'"))))?;
    if idx.len() != arity {
        return Err(locate(
            source,
            span,
            Error::parse(format!("entry '{text}' needs {arity} indices")),
        ));
    }
    let rhs = &text[eq + 1..];
    let lead = rhs.len() - rhs.trim_start().len();
    Ok((idx, rhs.trim(), eq + 1 + lead))
}

fn parse_rhs(source: &str, span: &Spanned<String>, chart: &Chart, rhs: &str, offset: usize) -> Result<SuperFunction> {
    parse_function(chart, rhs).map_err(|e| {
        let shifted = match e {
            Error::Parse { line, column, message } => Error::Parse {
                line,
                column: column + offset,
                message,
            },
            other => other,
        };
        locate(source, span, shifted)
    })
}

/// Everything a run needs, built and cross-validated.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub file: ScenarioFile,
    pub sha256: String,
    pub rep: GammaRep,
    pub beta: SpinorBilinear,
    pub alg: SuperPoincareAlgebra,
    pub chart: Chart,
    pub frame: FrameField,
    pub metric: FrameMetric,
    pub connection: Connection,
    pub flux: DOrthForm,
    pub volume: Option<VolumeForm>,
}

pub fn parse_signature(text: &str) -> Result<Signature> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [p, q] = parts.as_slice() else {
        return Err(Error::parse(format!("signature '{text}' must read 'p,q'")));
    };
    let p: usize = p.parse().map_err(|_| Error::parse(format!("bad p in '{text}'")))?;
    let q: usize = q.parse().map_err(|_| Error::parse(format!("bad q in '{text}'")))?;
    if q == 1 {
        Signature::lorentzian(p + 1)
    } else {
        Signature::new(p, q)
    }
}

pub fn parse_style(text: &str) -> Result<GammaStyle> {
    Ok(match text {
        "auto" => GammaStyle::Auto,
        "dirac" => GammaStyle::Dirac,
        "majorana" => GammaStyle::Majorana,
        "pauli" => GammaStyle::PauliString,
        other => return Err(Error::Validation(format!("unknown gamma style '{other}'"))),
    })
}

/// Named bilinear forms available without inline entries.
pub fn named_beta(name: &str, rep: &GammaRep) -> Result<SpinorBilinear> {
    match name {
        "eleven-dim" => eleven_dim_beta(rep),
        "charge-conjugation" => charge_conjugation_beta(rep),
        other => Err(Error::Validation(format!("unknown β '{other}'"))),
    }
}

pub fn parse_scenario(source: &str) -> Result<ScenarioFile> {
    toml::from_str(source).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| position(source, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

pub fn load(source: &str, jet_order: Option<u32>) -> Result<Loaded> {
    let file = parse_scenario(source)?;
    if file.version != FORMAT_VERSION {
        return Err(Error::Validation(format!(
            "scenario version {} is not supported (expected {FORMAT_VERSION})",
            file.version
        )));
    }
    for c in &file.checks {
        if !CHECKS.contains(&c.as_str()) {
            return Err(Error::Validation(format!("unknown check '{c}'")));
        }
    }
    let sha256 = format!("{:x}", Sha256::digest(source.as_bytes()));

    let a = &file.algebra;
    let signature = match (&a.signature, &a.eta) {
        (Some(s), None) => parse_signature(s)?,
        (None, Some(e)) => Signature::from_eta(e.clone())?,
        _ => return Err(Error::Validation("algebra needs exactly one of 'signature' and 'eta'".into())),
    };
    let rep = if a.gamma == "inline" {
        let dim = a
            .spinor_dim
            .ok_or_else(|| Error::Validation("inline gamma needs 'spinor_dim'".into()))?;
        let lines: Vec<String> = a.gamma_entries.iter().map(|s| s.get_ref().clone()).collect();
        GammaRep::from_entries(signature, dim, &lines)?
    } else {
        gamma_rep(&signature, parse_style(&a.gamma)?)?
    };
    let beta = if a.beta == "inline" {
        let d = rep.real_dim();
        let mut mat = Mat::zeros(d, d);
        for span in &a.beta_entries {
            let (idx, rhs, _) = split_entry(source, span, 2)?;
            if idx[0] >= d || idx[1] >= d {
                return Err(Error::Validation(format!("β entry {idx:?} outside {d}×{d}")));
            }
            mat[(idx[0], idx[1])] = parse_rational(rhs).map_err(|e| locate(source, span, e))?;
        }
        SpinorBilinear::new(mat)?
    } else {
        named_beta(&a.beta, &rep)?
    };
    let levi = bracket_tensor_from_beta(&beta, &rep)?;
    let alg = build_super_poincare(&rep, &beta, &levi)?;

    let c = &file.chart;
    if c.n != alg.n() || c.m != alg.m() {
        return Err(Error::Validation(format!(
            "chart ℝ^{}|{} does not match the algebra (V = {}, S = {})",
            c.n,
            c.m,
            alg.n(),
            alg.m()
        )));
    }
    let chart = Chart::new(c.n, c.m, c.generators, jet_order.unwrap_or(c.max_x_degree))?;

    let frame = match file.frame.kind.as_str() {
        "flat" => build_flat_spacetime(&alg, &chart)?.frame,
        "coordinate" => FrameField::coordinate(&chart)?,
        "explicit" => {
            let mut fields = Vec::with_capacity(chart.dim());
            for row in &file.frame.fields {
                let comps = row
                    .iter()
                    .map(|s| parse_rhs(source, s, &chart, s.get_ref(), 0))
                    .collect::<Result<Vec<_>>>()?;
                fields.push(SuperVectorField::new(&chart, comps)?);
            }
            if fields.len() != chart.dim() {
                return Err(Error::Validation(format!("frame needs {} fields", chart.dim())));
            }
            FrameField::new(&chart, fields)?
        }
        other => return Err(Error::Validation(format!("unknown frame kind '{other}'"))),
    };

    let metric = match file.metric.kind.as_str() {
        "extended" => FrameMetric::constant(&chart, &extended_inner_matrix(&alg))?,
        "explicit" => {
            let mut comps = BTreeMap::new();
            for span in &file.metric.entries {
                let (idx, rhs, off) = split_entry(source, span, 2)?;
                comps.insert((idx[0], idx[1]), parse_rhs(source, span, &chart, rhs, off)?);
            }
            FrameMetric::new(&chart, comps)?
        }
        other => return Err(Error::Validation(format!("unknown metric kind '{other}'"))),
    };

    let mut connection = Connection::zero(&chart);
    for span in &file.connection.entries {
        let (idx, rhs, off) = split_entry(source, span, 3)?;
        if idx.iter().any(|&i| i >= chart.dim()) {
            return Err(Error::Validation(format!("connection index {idx:?} out of range")));
        }
        let f = parse_rhs(source, span, &chart, rhs, off)?;
        connection.set(idx[0], idx[1], idx[2], f)?;
    }

    let mut comps = Vec::new();
    for span in &file.flux.entries {
        let (idx, rhs, off) = split_entry(source, span, 4)?;
        comps.push((idx, parse_rhs(source, span, &chart, rhs, off)?));
    }
    let flux = DOrthForm::from_components(&chart, 4, comps)?;
    if !flux.is_even() {
        return Err(Error::Validation("F must be even".into()));
    }

    let volume = match file.orientation.kind.as_str() {
        "standard" => Some(VolumeForm::standard(&chart)?),
        "none" => None,
        "lambda" => {
            let span = file
                .orientation
                .lambda
                .as_ref()
                .ok_or_else(|| Error::Validation("orientation 'lambda' needs a value".into()))?;
            let l = parse_rhs(source, span, &chart, span.get_ref(), 0)?;
            let all: Vec<usize> = (0..chart.n).collect();
            Some(VolumeForm::new(DOrthForm::from_components(&chart, chart.n, [(all, l)])?)?)
        }
        other => return Err(Error::Validation(format!("unknown orientation kind '{other}'"))),
    };

    Ok(Loaded {
        file,
        sha256,
        rep,
        beta,
        alg,
        chart,
        frame,
        metric,
        connection,
        flux,
        volume,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: String,
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckEntry {
    fn from_report(r: &CheckReport) -> Self {
        CheckEntry {
            name: r.name.clone(),
            status: if r.pass { "pass" } else { "fail" }.into(),
            violations: r.violations,
            worst: r.worst.clone(),
            notes: r.notes.clone(),
        }
    }

    fn error(name: &str, e: &Error) -> Self {
        CheckEntry {
            name: name.into(),
            status: "error".into(),
            violations: 0,
            worst: Some(e.to_string()),
            notes: Vec::new(),
        }
    }
}

/// One requested check with its sub-results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckGroup {
    pub check: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<CheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub scenario_sha256: String,
    pub status: String,
    pub groups: Vec<CheckGroup>,
    /// Milliseconds per check; not part of the deterministic body.
    #[serde(default)]
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    /// Everything except timing.
    pub fn body(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.timing_ms.clear();
        toml::to_string(&copy).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| position(text, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}\nscenario {}\nstatus {}\n",
            self.tool, self.scenario_sha256, self.status
        );
        for g in &self.groups {
            out.push_str(&format!("[{}] {}\n", g.status, g.check));
            for r in &g.results {
                out.push_str(&format!("  {}: {}", r.name, r.status));
                if r.status != "pass" {
                    out.push_str(&format!(" ({} nonzero", r.violations));
                    if let Some(w) = &r.worst {
                        out.push_str(&format!("; worst {w}"));
                    }
                    out.push(')');
                }
                out.push('\n');
                for n in &r.notes {
                    out.push_str(&format!("    {n}\n"));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the scenario check list.
    pub checks: Option<Vec<String>>,
    /// Random Jacobi triples instead of full enumeration.
    pub sample: Option<usize>,
}

fn single(name: &str, pass: bool, worst: Option<String>) -> Vec<CheckEntry> {
    vec![CheckEntry {
        name: name.into(),
        status: if pass { "pass" } else { "fail" }.into(),
        violations: usize::from(!pass),
        worst,
        notes: Vec::new(),
    }]
}

fn run_check(name: &str, l: &Loaded, opts: &RunOptions) -> Result<Vec<CheckEntry>> {
    let n = l.chart.n;
    let from = |r: &CheckReport| CheckEntry::from_report(r);
    Ok(match name {
        "gamma" => {
            let bad = l.rep.anticommutator_failures();
            single(
                "gamma relations",
                bad.is_empty(),
                bad.first().map(|(i, j)| format!("Γ{i}Γ{j} + Γ{j}Γ{i} ≠ −2η")),
            )
        }
        "admissible" => {
            let r = check_admissible(&l.beta, &l.rep)?;
            single(
                "beta admissible",
                r.admissible,
                Some(format!(
                    "symmetry {:?}, clifford type {:?}, split type {:?}",
                    r.symmetry, r.clifford_type, r.split_type
                )),
            )
        }
        "jacobi" => {
            let sampling = match opts.sample.or(l.file.jacobi_sample) {
                Some(count) => Sampling::Random { count, seed: 0 },
                None => Sampling::All,
            };
            let r = jacobi_check(&l.alg, sampling);
            let pass = r.worst.is_none();
            let mut e = single(
                "jacobi",
                pass,
                r.worst.map(|(a, b, c)| format!("({a},{b},{c}) = {}", format_rational(&r.max_residual))),
            );
            e[0].notes.push(format!("{} triples", r.triples));
            e
        }
        "levi" => {
            let pair = DistributionPair::of(&l.frame);
            let t = compute_levi(&l.frame, &pair)?;
            let pass = t.constants().as_deref() == Some(l.alg.levi());
            single("levi tensor = L", pass, (!pass).then(|| "L^i differs from the algebra".to_string()))
        }
        "torsion" => {
            let torsion = l.connection.torsion(&l.frame)?;
            let dec = decompose_torsion(&torsion, n);
            let mut res = BTreeMap::new();
            for (i, li) in l.alg.levi().iter().enumerate() {
                for (a, b, v) in li.entries() {
                    let key = (i, n + a, n + b);
                    let h = dec.h_d_perp.get(&key).cloned().unwrap_or_else(|| SuperFunction::zero(&l.chart));
                    let s = &h + &SuperFunction::constant(&l.chart, v.clone());
                    res.insert(key, s);
                }
            }
            for (k, v) in &dec.h_d_perp {
                if !res.contains_key(k) {
                    res.insert(*k, v.clone());
                }
            }
            let r = CheckReport::from_residuals("H^{L2 D;D_perp} + L", &res, |&(c, a, b)| {
                format!("T^{c}({a},{b})")
            });
            vec![from(&r)]
        }
        "strong-lc" => {
            let dec = decompose_torsion(&l.connection.torsion(&l.frame)?, n);
            vec![from(&check_strong_levi_civita(&dec, n))]
        }
        "lc" => {
            let dec = decompose_torsion(&l.connection.torsion(&l.frame)?, n);
            vec![from(&check_levi_civita(&dec, &l.metric, n))]
        }
        "gravity-field" => {
            let r = check_gravity_field(&l.alg, &l.frame, &l.metric, &l.connection)?;
            vec![from(&r)]
        }
        "physical-fields" => {
            let p = extract_physical_fields(&l.frame, &l.metric, &l.connection)?;
            let (pos, neg, zero) = p.graviton_signature()?;
            vec![from(&p.check_parities().with_note(format!("graviton inertia ({pos},{neg},{zero})")))]
        }
        "cjs-constraints" | "field-equations" | "fierz" => {
            let scn = CJSScenario::new(
                l.alg.clone(),
                l.rep.clone(),
                l.frame.clone(),
                l.metric.clone(),
                l.connection.clone(),
                l.flux.clone(),
                l.volume.clone(),
            )?;
            match name {
                "cjs-constraints" => cjs_constraint_residual(&scn)?.checks.iter().map(from).collect(),
                "field-equations" => field_equation_residuals(&scn)?.checks.iter().map(from).collect(),
                _ => vec![from(&check_fierz(&scn)?.0)],
            }
        }
        other => return Err(Error::Validation(format!("unknown check '{other}'"))),
    })
}

/// Runs the requested checks in dependency order.
pub fn run(l: &Loaded, opts: &RunOptions) -> Result<Report> {
    let requested = opts.checks.clone().unwrap_or_else(|| l.file.checks.clone());
    for c in &requested {
        if !CHECKS.contains(&c.as_str()) {
            return Err(Error::Validation(format!("unknown check '{c}'")));
        }
    }
    let mut groups = Vec::new();
    let mut timing = BTreeMap::new();
    for name in CHECKS.iter().filter(|c| requested.iter().any(|r| r == *c)) {
        let start = Instant::now();
        let results = run_check(name, l, opts).unwrap_or_else(|e| vec![CheckEntry::error(name, &e)]);
        timing.insert(name.to_string(), start.elapsed().as_millis() as u64);
        let status = if results.iter().any(|r| r.status == "error") {
            "error"
        } else if results.iter().all(|r| r.status == "pass") {
            "pass"
        } else {
            "fail"
        };
        groups.push(CheckGroup {
            check: name.to_string(),
            status: status.into(),
            results,
        });
    }
    let status = if groups.iter().all(|g| g.status == "pass") { "pass" } else { "fail" };
    Ok(Report {
        tool: format!("supergeom {}", env!("CARGO_PKG_VERSION")),
        scenario_sha256: l.sha256.clone(),
        status: status.into(),
        groups,
        timing_ms: timing,
    })
}

/// Canonical flat-model scenario with its Γ matrices and β embedded.
pub fn flat_scenario(signature: &Signature, generators: u32) -> Result<String> {
    let rep = gamma_rep(signature, GammaStyle::Auto)?;
    let (beta_name, checks): (&str, Vec<&str>) = if signature.n() == 11 {
        (
            "eleven-dim",
            vec!["gamma", "admissible", "jacobi", "levi", "torsion", "strong-lc", "lc", "gravity-field", "cjs-constraints", "field-equations"],
        )
    } else {
        (
            "charge-conjugation",
            vec!["gamma", "admissible", "jacobi", "levi", "torsion", "strong-lc", "lc", "gravity-field", "physical-fields"],
        )
    };
    let beta = named_beta(beta_name, &rep)?;
    let spanned = |s: String| Spanned::new(0..0, s);
    let file = ScenarioFile {
        version: FORMAT_VERSION,
        checks: checks.into_iter().map(String::from).collect(),
        jacobi_sample: (signature.n() == 11).then_some(10_000),
        algebra: AlgebraSection {
            signature: None,
            eta: Some(signature.entries().to_vec()),
            gamma: "inline".into(),
            spinor_dim: Some(rep.dim_s()),
            gamma_entries: rep.to_entries().into_iter().map(spanned).collect(),
            beta: "inline".into(),
            beta_entries: beta
                .matrix()
                .entries()
                .map(|(r, c, v)| spanned(format!("{r} {c} = {}", format_rational(v))))
                .collect(),
        },
        chart: ChartSection {
            n: signature.n(),
            m: rep.real_dim(),
            generators,
            max_x_degree: 1,
        },
        frame: FrameSection {
            kind: "flat".into(),
            fields: Vec::new(),
        },
        metric: MetricSection {
            kind: "extended".into(),
            entries: Vec::new(),
        },
        connection: EntriesSection::default(),
        flux: EntriesSection::default(),
        orientation: OrientationSection {
            kind: "standard".into(),
            lambda: None,
        },
    };
    toml::to_string(&file).map_err(|e| Error::Io(e.to_string()))
}
