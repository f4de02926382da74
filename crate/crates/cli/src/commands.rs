use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use divide_core::calibration::{self, Check};
use divide_core::diagram::{
    build_diagram_with, gauss_code, pd_code, Convention, CrossingRole, DiagramConfig, DiagramError, LinkDiagram,
    SlopeRule, TwistRule,
};
use divide_core::divide::{genericity_check, perturb_branches, Divide, DivideError, TangencyKind};
use divide_core::dsl::{parse, serialize, DivideDocument};
use divide_core::generators::{self, canned_source, GeneratorError, TorusParams, CANNED_NAMES};
use divide_core::geometry::Point2;
use divide_core::invariants::{
    alexander_fox, conway_skein_capped, jones_kauffman, writhe_and_linking, InvariantError,
};
use divide_core::render::{render_diagram_svg, render_divide_svg, RenderConfig};
use divide_core::Rational;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    ResourceLimit(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Read(..) => "read",
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::ResourceLimit(_) => "resource-limit",
            CliError::Internal(_) => "internal",
        }
    }
}

impl From<DivideError> for CliError {
    fn from(e: DivideError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::EpsilonCollision(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::ResourceLimit { .. } => CliError::ResourceLimit(e.to_string()),
            InvariantError::MultiComponent(_) => CliError::Validation(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::GenerationFailed(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub struct Settings {
    pub seed: u64,
    pub epsilon: Rational,
    pub mirror_gap: Rational,
    pub jones_cap: usize,
    pub conway_cap: usize,
}

impl Settings {
    fn diagram_config(&self) -> DiagramConfig {
        DiagramConfig { mirror_gap: self.mirror_gap.clone(), convention: Convention::CALIBRATED }
    }
}

/// What a command prints: plain lines or one JSON value, and its exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { text, json, code: 0 }
    }

    /// Writes the report to stdout; a closed pipe is not an error.
    pub fn print(&self, json: bool) {
        let mut out = if json {
            serde_json::to_string_pretty(&self.json).expect("serializable report")
        } else {
            self.text.clone()
        };
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        let _ = io::stdout().lock().write_all(out.as_bytes());
    }
}

fn read_document(path: &Path) -> Result<DivideDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Read(path.to_path_buf(), e))?;
    parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

/// A generic divide for `path`, perturbed when the input is not generic.
fn load_generic(settings: &Settings, path: &Path) -> Result<(DivideDocument, Divide, bool), CliError> {
    let doc = read_document(path)?;
    let divide = perturb_branches(&doc.branches, &settings.epsilon, settings.seed)?;
    let perturbed = divide.branches() != doc.branches.as_slice();
    Ok((doc, divide, perturbed))
}

fn exact(p: &Point2) -> Value {
    json!([p.x.to_string(), p.y.to_string()])
}

fn approx(p: &Point2) -> String {
    let (x, y) = p.to_f64();
    format!("({x:.4}, {y:.4})")
}

fn validate_file(path: &Path) -> Result<Divide, CliError> {
    Ok(divide_core::divide::validate(read_document(path)?.branches)?)
}

pub fn validate(path: &Path) -> Result<Report, CliError> {
    let divide = validate_file(path)?;
    let report = genericity_check(&divide);
    let mut text = format!(
        "valid: {} branches, {} double points, {} tangencies\n",
        divide.branches().len(),
        divide.double_points().len(),
        divide.tangencies().len()
    );
    text += &format!("generic: {}\n", if report.generic { "yes" } else { "no" });
    for v in &report.violations {
        text += &format!("  {}: {}\n", v.code, v.description);
    }
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "code": v.code.as_str(), "description": v.description, "perturbable": v.code.is_perturbable() }))
        .collect();
    let json = json!({ "valid": true, "generic": report.generic, "violations": violations });
    Ok(Report { text, json, code: if report.generic { 0 } else { 1 } })
}

pub fn info(path: &Path) -> Result<Report, CliError> {
    let doc = read_document(path)?;
    let divide = divide_core::divide::validate(doc.branches.clone())?;
    let generic = genericity_check(&divide).generic;
    let mut text = String::new();
    if let Some(name) = &doc.name {
        text += &format!("name: {name}\n");
    }
    text += &format!("branches: {}\n", divide.branches().len());
    for (k, b) in divide.branches().iter().enumerate() {
        let kind = if b.is_closed() { "closed" } else { "open" };
        text += &format!("  {}: {kind}, {} vertices\n", k + 1, b.vertices.len());
    }
    text += &format!("double points: {}\n", divide.double_points().len());
    for dp in divide.double_points() {
        let [a, b] = &dp.incidences;
        text += &format!("  {} branches {} and {}\n", approx(&dp.position), a.branch + 1, b.branch + 1);
    }
    text += &format!("tangencies: {}\n", divide.tangencies().len());
    for t in divide.tangencies() {
        text += &format!("  {} {} on branch {}\n", kind_name(t.kind), approx(divide.tangency_point(t)), t.branch + 1);
    }
    text += &format!("generic: {}\n", if generic { "yes" } else { "no" });
    let json = json!({
        "name": doc.name,
        "comment": doc.comment,
        "branches": divide.branches().iter().map(|b| json!({
            "kind": if b.is_closed() { "closed" } else { "open" },
            "vertices": b.vertices.len(),
        })).collect::<Vec<_>>(),
        "double_points": divide.double_points().iter().map(|d| json!({
            "position": exact(&d.position),
            "branches": [d.incidences[0].branch, d.incidences[1].branch],
        })).collect::<Vec<_>>(),
        "tangencies": divide.tangencies().iter().map(|t| json!({
            "kind": kind_name(t.kind),
            "position": exact(divide.tangency_point(t)),
            "branch": t.branch,
        })).collect::<Vec<_>>(),
        "generic": generic,
    });
    Ok(Report::ok(text, json))
}

fn kind_name(k: TangencyKind) -> &'static str {
    match k {
        TangencyKind::XMin => "x-min",
        TangencyKind::XMax => "x-max",
    }
}

pub fn perturb(settings: &Settings, path: &Path, output: Option<&Path>) -> Result<Report, CliError> {
    let (doc, divide, changed) = load_generic(settings, path)?;
    let out = DivideDocument { branches: divide.branches().to_vec(), ..doc };
    let text = serialize(&out);
    let json = match output {
        Some(p) => {
            write_output(p, &text)?;
            json!({ "changed": changed, "output": p.display().to_string() })
        }
        None => json!({ "changed": changed, "divide": text }),
    };
    Ok(Report::ok(if output.is_some() { String::new() } else { text }, json))
}

pub struct DiagramOutputs {
    pub pd: bool,
    pub gauss: bool,
    pub svg: Option<PathBuf>,
    pub divide_svg: Option<PathBuf>,
    pub labels: bool,
    pub canvas: u32,
}

fn build(settings: &Settings, path: &Path) -> Result<(Divide, LinkDiagram, bool), CliError> {
    let (_, divide, perturbed) = load_generic(settings, path)?;
    let diagram = build_diagram_with(&divide, &settings.diagram_config())?;
    Ok((divide, diagram, perturbed))
}

const ROLES: [CrossingRole; 5] = [
    CrossingRole::DoubleUpper,
    CrossingRole::DoubleLower,
    CrossingRole::HalfTwist,
    CrossingRole::StringCurveUpper,
    CrossingRole::StringCurveLower,
];

pub fn diagram(settings: &Settings, path: &Path, out: &DiagramOutputs) -> Result<Report, CliError> {
    let (divide, d, perturbed) = build(settings, path)?;
    let render = if out.svg.is_some() || out.divide_svg.is_some() {
        let cfg = RenderConfig::new(out.canvas, 2.0, 10.0).map_err(|e| CliError::Validation(e.to_string()))?;
        Some(cfg.with_labels(out.labels))
    } else {
        None
    };
    if let (Some(p), Some(cfg)) = (&out.svg, &render) {
        write_output(p, &render_diagram_svg(&d, cfg))?;
    }
    if let (Some(p), Some(cfg)) = (&out.divide_svg, &render) {
        write_output(p, &render_divide_svg(&divide, cfg))?;
    }
    let pd = pd_code(&d).to_string();
    let gauss = gauss_code(&d).to_string();
    let mut text = String::new();
    if !out.pd && !out.gauss {
        text += &format!("crossings: {}\ncomponents: {}\nwrithe: {}\n", d.crossing_count(), d.component_count(), d.writhe());
        for role in ROLES {
            text += &format!("  {role}: {}\n", d.count_role(role));
        }
        if perturbed {
            text += "input was perturbed to a generic divide\n";
        }
    }
    if out.pd {
        text += &format!("{pd}\n");
    }
    if out.gauss {
        text += &format!("{gauss}\n");
    }
    let roles: serde_json::Map<String, Value> =
        ROLES.iter().map(|r| (r.as_str().to_string(), json!(d.count_role(*r)))).collect();
    let crossings: Vec<Value> = d
        .crossings()
        .iter()
        .map(|c| json!({ "id": c.id + 1, "role": c.role.as_str(), "sign": c.sign, "position": exact(&c.position) }))
        .collect();
    let json = json!({
        "crossings": d.crossing_count(),
        "components": d.component_count(),
        "writhe": d.writhe(),
        "perturbed": perturbed,
        "roles": roles,
        "crossing_list": crossings,
        "pd": pd,
        "gauss": gauss,
    });
    Ok(Report::ok(text, json))
}

pub struct Which {
    pub alexander: bool,
    pub conway: bool,
    pub jones: bool,
    pub linking: bool,
    /// Explicitly requested invariants turn failures into errors; otherwise
    /// they are reported as unavailable.
    pub strict: bool,
}

pub fn invariants(settings: &Settings, path: &Path, which: &Which) -> Result<Report, CliError> {
    let (_, d, _) = build(settings, path)?;
    let mut lines: Vec<(&str, String)> = Vec::new();
    let mut json = serde_json::Map::new();
    json.insert("components".into(), json!(d.component_count()));
    json.insert("crossings".into(), json!(d.crossing_count()));

    let mut record = |name: &'static str, value: Result<String, InvariantError>| -> Result<(), CliError> {
        match value {
            Ok(v) => {
                json.insert(name.into(), json!(v));
                lines.push((name, v));
            }
            Err(e) if which.strict => return Err(e.into()),
            Err(e) => {
                json.insert(name.into(), Value::Null);
                lines.push((name, format!("unavailable ({e})")));
            }
        }
        Ok(())
    };
    if which.alexander {
        record("alexander", alexander_fox(&d).map(|p| p.to_string()))?;
    }
    if which.conway {
        record("conway", conway_skein_capped(&d, settings.conway_cap).map(|p| p.to_string()))?;
    }
    if which.jones {
        record("jones", jones_kauffman(&d, settings.jones_cap).map(|p| p.to_string()))?;
    }
    if which.linking {
        let (w, link) = writhe_and_linking(&d);
        let rows: Vec<String> =
            link.rows().iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect();
        lines.push(("writhe", w.to_string()));
        lines.push(("linking", rows.join("; ")));
        json.insert("writhe".into(), json!(w));
        json.insert("linking".into(), json!(link.rows()));
    }
    let text = if lines.len() == 1 {
        format!("{}\n", lines[0].1)
    } else {
        lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    };
    Ok(Report::ok(text, Value::Object(json)))
}

pub enum Gen {
    Torus { p: u32, q: u32, samples: Option<u32> },
    Example(String),
    Random { branches: usize, max_vertices: usize },
}

pub fn generate(settings: &Settings, kind: &Gen, output: Option<&Path>) -> Result<Report, CliError> {
    let text = match kind {
        Gen::Torus { p, q, samples } => {
            let mut params = TorusParams::new(*p, *q);
            if let Some(s) = samples {
                params = params.with_samples(*s);
            }
            let divide = generators::torus_divide(params, settings.seed)?;
            let mut doc = DivideDocument::from_divide(&divide);
            doc.name = Some(format!("torus-{p}-{q}"));
            doc.comment = Some(format!("Chebyshev divide of x^{p} - y^{q}"));
            serialize(&doc)
        }
        Gen::Example(name) => match canned_source(name) {
            Some(src) => src.to_string(),
            None => {
                return Err(CliError::Validation(format!(
                    "unknown example {name:?}; known: {}",
                    CANNED_NAMES.join(", ")
                )))
            }
        },
        Gen::Random { branches, max_vertices } => {
            let divide = generators::random_divide(*branches, *max_vertices, settings.seed)?;
            let mut doc = DivideDocument::from_divide(&divide);
            doc.name = Some(format!("random-{branches}-{}", settings.seed));
            serialize(&doc)
        }
    };
    match output {
        Some(p) => {
            write_output(p, &text)?;
            Ok(Report::ok(String::new(), json!({ "output": p.display().to_string() })))
        }
        None => Ok(Report::ok(text.clone(), json!({ "divide": text }))),
    }
}

pub fn selftest(invert: bool) -> Result<Report, CliError> {
    let convention = if invert {
        Convention { slope: SlopeRule::LargerSlopeOver, twist: TwistRule::FallingOver }
    } else {
        Convention::CALIBRATED
    };
    let checks = calibration::selftest(convention);
    let text: String = checks.iter().map(|c| format!("{c}\n")).collect();
    let json = json!({
        "passed": checks.iter().all(Check::passed),
        "checks": checks.iter().map(|c| json!({
            "name": c.name, "expected": c.expected, "actual": c.actual, "passed": c.passed(),
        })).collect::<Vec<_>>(),
    });
    match calibration::verify(checks) {
        Ok(_) => Ok(Report::ok(text, json)),
        Err(drift) => {
            eprint!("{text}");
            Err(CliError::Internal(drift.to_string()))
        }
    }
}
