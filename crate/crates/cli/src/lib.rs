//! Command implementations for the `manin` binary.
//!
//! Every command returns an [`Outcome`] holding the rendered output and the exit code, so
//! tests can drive the tool without spawning a process.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or the point is not
//! admissible, 2 for usage and parse errors.

pub mod specs;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use manin_core::groupgeom::{self as gg, MatrixGroupModel, NumericTwist};
use manin_core::io::AlgebraFile;
use manin_core::linalg::RatMatrix;
use manin_core::quasilie::{
    build_pair_from_metric, check_identities, form_invariance_defect, standard_triple, verify_manin_pair,
    LieAlgebraSpec, QuasiTriple, Twist,
};
use manin_core::report::{CheckRecord, Report, Residual, Status};
use manin_core::scalar;
use manin_core::{Error, Result};

pub const TOOL: &str = concat!("manin ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "manin", version, about = "Verifies Manin pairs, quasi-triples and quasi-Poisson geometry on matrix groups")]
#[command(after_help = "Exit codes: 0 all checks pass, 1 a check failed or the point is not admissible, 2 usage or parse error.")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Group,
    Moment,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Group => "group",
            Suite::Moment => "moment",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks the Jacobi identity, the bilinear form, and any Manin subalgebra or representation.
    Validate { file: PathBuf },
    /// Builds the double g ⊕ g of a metric Lie algebra and derives (F, φ) for a complement.
    Double {
        file: PathBuf,
        /// Twist of the reference complement, e.g. "e1^e2:1/2,e2^e3:-1".
        #[arg(long, default_value = "")]
        complement: String,
        /// Writes the double as an algebra file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Twist used by the algebra suite instead of a seeded random one.
        #[arg(long)]
        complement: Option<String>,
    },
    /// Prints a pointwise object in the left trivialization.
    Eval {
        file: PathBuf,
        /// "exp(c1*e1+...)", "diag-torus(theta)" or a JSON matrix.
        #[arg(long)]
        at: String,
        /// PG, PS, phiS, hat:<x>, dressing:<x> or tau.
        #[arg(long)]
        object: String,
        #[arg(long, default_value = "")]
        complement: String,
    },
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code }
    }
}

struct Input {
    text: String,
    digest: String,
    file: AlgebraFile,
}

/// Line and column (1-based) of the first occurrence of `needle`.
fn locate(text: &str, needle: &str) -> Option<(usize, usize)> {
    let at = text.find(needle)?;
    let line = text[..at].matches('\n').count() + 1;
    let column = text[..at].rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Some((line, column))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Rational(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

/// Error message with a source position where one can be recovered.
fn describe(e: &Error, text: Option<&str>) -> String {
    match e {
        Error::Json(j) if j.line() > 0 => {
            let msg = j.to_string();
            let suffix = format!(" at line {} column {}", j.line(), j.column());
            format!("line {}, column {}: {}", j.line(), j.column(), msg.strip_suffix(&suffix).unwrap_or(&msg))
        }
        Error::Rational(s) => match text.and_then(|t| locate(t, &format!("\"{s}\""))) {
            Some((l, c)) => format!("line {l}, column {c}: {e}"),
            None => e.to_string(),
        },
        _ => e.to_string(),
    }
}

fn read_input(path: &Path) -> std::result::Result<Input, Outcome> {
    let bytes = std::fs::read(path).map_err(|e| Outcome::failure(2, format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| Outcome::failure(2, format!("{}: {e}", path.display())))?;
    let file = AlgebraFile::from_json(&text).map_err(|e| Outcome::failure(exit_code(&e), describe(&e, Some(&text))))?;
    Ok(Input { text, digest, file })
}

pub fn run(cli: &Cli) -> Outcome {
    let path = match &cli.command {
        Command::Validate { file } | Command::Double { file, .. } | Command::Verify { file, .. } | Command::Eval { file, .. } => file,
    };
    let input = match read_input(path) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let result = match &cli.command {
        Command::Validate { .. } => validate(&input.file).map(|r| render_report(cli.format, "validate", &input, r, None)),
        Command::Double { complement, out, .. } => double(cli.format, &input, complement, out.as_deref()),
        Command::Verify { suite, seed, samples, tol, complement, .. } => {
            verify(&input.file, *suite, *seed, *samples, *tol, complement.as_deref()).map(|r| {
                let command = format!("verify --suite {} --seed {seed} --samples {samples} --tol {tol:e}", suite.name());
                render_report(cli.format, &command, &input, r, None)
            })
        }
        Command::Eval { at, object, complement, .. } => eval(cli.format, &input, at, object, complement),
    };
    result.unwrap_or_else(|e| Outcome::failure(exit_code(&e), describe(&e, Some(&input.text))))
}

// validate

fn label_triple(space: &manin_core::tensoralg::BasedSpace, idx: &[usize]) -> String {
    idx.iter().map(|&i| space.label(i)).collect::<Vec<_>>().join(",")
}

/// Structural checks of an algebra file. Later checks need the earlier ones to pass.
pub fn validate(file: &AlgebraFile) -> Result<Report> {
    let sc = file.structure_constants()?;
    let space = sc.space().clone();
    let form = file.form()?;
    let subalgebra = file.manin_subalgebra()?;
    let rep = file.representation()?;
    let mut report = Report::new();

    let jac = sc.jacobi_defect();
    let witness = jac.first_violation().map(|(i, j, k, l, v)| {
        format!("({}) component {}: {}", label_triple(&space, &[i, j, k]), space.label(l), scalar::render(&v))
    });
    report.push(CheckRecord::exact("jacobi", "Jacobi identity of the structure constants", &jac.max_abs(), witness));

    if let Some(k) = &form {
        let n = k.rows();
        let asym = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| k[(i, j)] != k[(j, i)]);
        report.push(CheckRecord::boolean(
            "form.symmetric",
            "the bilinear form is symmetric",
            asym.is_none(),
            asym.map(|(i, j)| format!("({},{})", space.label(i), space.label(j))),
        ));
        report.push(CheckRecord::boolean("form.nondegenerate", "the bilinear form is nondegenerate", k.inverse().is_some(), None));
        let defect = form_invariance_defect(&sc, k);
        let residual = defect.as_ref().map_or_else(scalar::zero, |d| d.3.clone());
        let witness = defect.map(|(i, j, l, _)| format!("({})", label_triple(&space, &[i, j, l])));
        report.push(CheckRecord::exact("form.invariant", "ad-invariance: K([x,y],z) + K(y,[x,z]) = 0", &residual, witness));
    }

    if !report.all_pass() {
        return Ok(report.sorted());
    }
    let spec = LieAlgebraSpec::new(file.name.clone(), sc, form)?;
    if let Some(rows) = &subalgebra {
        report.extend(verify_manin_pair(&spec, rows));
    }
    if let Some(rep) = rep {
        let model = MatrixGroupModel::new(spec, rep);
        report.push(CheckRecord::boolean(
            "representation",
            "the representation matrices satisfy the commutation relations",
            model.is_ok(),
            model.err().map(|e| e.to_string()),
        ));
    }
    Ok(report.sorted())
}

// double

fn twist_for(g: &LieAlgebraSpec, spec: &str) -> Result<Twist> {
    specs::parse_twist(spec, g.space())
}

fn identity_rows(n: usize) -> RatMatrix {
    let mut rows = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        rows[(i, i)] = scalar::one();
    }
    rows
}

fn render_rat(m: &RatMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|v| json!(scalar::render(v))).collect())).collect())
}

fn derived_data(qt: &QuasiTriple) -> Value {
    let g = qt.g();
    let cobracket: serde_json::Map<String, Value> = qt
        .data()
        .cobracket()
        .iter()
        .enumerate()
        .map(|(k, f)| (g.space().label(k).to_string(), json!(f.to_string())))
        .collect();
    json!({
        "cobracket": cobracket,
        "complement": render_rat(qt.j()),
        "phi": qt.data().phi().to_string(),
        "twist": qt.twist().bivector().to_string(),
    })
}

fn double(format: Format, input: &Input, complement: &str, out: Option<&Path>) -> Result<Outcome> {
    let g = input.file.to_spec()?;
    let t = twist_for(&g, complement)?;
    let qt = build_pair_from_metric(&g)?.twisted(&t)?;
    let mut file = AlgebraFile::from_spec(qt.d());
    file.set_manin_subalgebra(&identity_rows(g.dim()));
    let mut report = check_identities(&qt);
    report.extend(verify_manin_pair(qt.d(), &identity_rows(g.dim())));
    let mut extra = vec![("derived", derived_data(&qt))];
    match out {
        Some(p) => std::fs::write(p, file.to_json()).map_err(|e| Error::Model(format!("{}: {e}", p.display())))?,
        None => extra.push(("double", serde_json::to_value(&file)?)),
    }
    let command = if complement.trim().is_empty() { "double".to_string() } else { format!("double --complement {complement}") };
    Ok(render_report(format, &command, input, report.sorted(), Some(extra)))
}

// verify

fn group_model(file: &AlgebraFile) -> Result<MatrixGroupModel> {
    if file.representation.is_none() {
        return Err(Error::Parse("the group and moment suites need representation matrices".into()));
    }
    MatrixGroupModel::from_file(file)
}

/// Exact identities of the standard triple, the metric double, and one twist of it.
fn algebra_suite(g: &LieAlgebraSpec, seed: u64, complement: Option<&str>) -> Result<Report> {
    let mut report = check_identities(&standard_triple(g)?).prefixed("standard.");
    if g.form().is_some() {
        let metric = build_pair_from_metric(g)?;
        let t = match complement {
            Some(spec) => twist_for(g, spec)?,
            None => Twist::random(g.space(), &mut ChaCha8Rng::seed_from_u64(seed)),
        };
        let twisted = metric.twisted(&t)?;
        report.extend(check_identities(&metric).prefixed("metric."));
        report.extend(check_identities(&twisted).prefixed("twisted."));
    }
    Ok(report)
}

pub fn verify(file: &AlgebraFile, suite: Suite, seed: u64, samples: usize, tol: f64, complement: Option<&str>) -> Result<Report> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
    }
    let report = match suite {
        Suite::Algebra => algebra_suite(&file.to_spec()?, seed, complement)?,
        Suite::Group => gg::group_suite(&group_model(file)?, samples, seed, tol)?,
        Suite::Moment => gg::moment_suite(&group_model(file)?, samples, seed, tol)?,
    };
    Ok(report.sorted())
}

// eval

fn matrix_value(m: &DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| json!(m.row(i).iter().copied().collect::<Vec<f64>>())).collect())
}

fn vector_value(v: &DVector<f64>) -> Value {
    json!(v.iter().copied().collect::<Vec<f64>>())
}

fn trivector_value(u: &gg::FloatMultivector, space: &manin_core::tensoralg::BasedSpace) -> Value {
    let n = space.dim();
    let mut terms = serde_json::Map::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                terms.insert(label_triple(space, &[i, j, k]).replace(',', "^"), json!(u.get(&[i, j, k])));
            }
        }
    }
    Value::Object(terms)
}

/// Evaluates `object` at the point `at`; the twist applies to the metric pair's complement.
pub fn evaluate(file: &AlgebraFile, at: &str, object: &str, complement: &str) -> Result<Value> {
    let model = group_model(file)?;
    let g = model.algebra();
    let space = g.space();
    let s = specs::parse_element(at, &model)?;
    let t = twist_for(g, complement)?;
    let nt = NumericTwist::from_twist(&t);
    let vector = |x: &str| specs::parse_combination(x, space).map(DVector::from_vec);
    let value = match object.split_once(':') {
        Some(("hat", x)) => vector_value(&gg::hat_form(&vector(x)?, &s, &nt, &model)?),
        Some(("dressing", x)) => {
            let x = vector(x)?;
            vector_value(&gg::dressing_field(&x, &x, &s))
        }
        Some(_) => return Err(Error::Parse(format!("unknown object {object:?}"))),
        None => match object {
            "PS" => matrix_value(&gg::p_s_matrix(&s, &nt, &model)?),
            "PG" => {
                let qt = build_pair_from_metric(g)?.twisted(&t)?;
                matrix_value(&gg::bivector_p_g(&s, &qt)?.left)
            }
            "phiS" => {
                let qt = build_pair_from_metric(g)?.twisted(&t)?;
                trivector_value(&gg::phi_s(&s, qt.data().phi()), space)
            }
            "tau" => matrix_value(&gg::tau_map(&s, &nt, &model)?),
            _ => return Err(Error::Parse(format!("unknown object {object:?}"))),
        },
    };
    Ok(value)
}

fn eval(format: Format, input: &Input, at: &str, object: &str, complement: &str) -> Result<Outcome> {
    let value = evaluate(&input.file, at, object, complement)?;
    let doc = json!({
        "at": at,
        "complement": complement,
        "frame": "left",
        "input_sha256": input.digest,
        "object": object,
        "tool": TOOL,
        "value": value,
    });
    let stdout = match format {
        Format::Json => canonical(&doc),
        Format::Text => format!("{object} at {at} (left trivialization)\n{}", canonical(&doc["value"])),
    };
    Ok(Outcome { stdout, stderr: String::new(), code: 0 })
}

// rendering

fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn residual_text(r: &Residual) -> String {
    match r {
        Residual::Exact(s) => s.clone(),
        Residual::Float(x) => format!("{x:e}"),
    }
}

fn render_report(format: Format, command: &str, input: &Input, report: Report, extra: Option<Vec<(&str, Value)>>) -> Outcome {
    let code = if report.all_pass() { 0 } else { 1 };
    let failed = report.failures().count();
    let total = &report.checks.len();
    let stdout = match format {
        Format::Json => {
            let mut doc = json!({
                "checks": &report.checks,
                "command": command,
                "input_sha256": input.digest,
                "summary": {"checks": total, "failed": failed, "pass": code == 0},
                "tool": TOOL,
            });
            for (k, v) in extra.unwrap_or_default() {
                doc[k] = v;
            }
            canonical(&doc)
        }
        Format::Text => {
            let mut out = format!("{TOOL}  {command}  sha256:{}\n", input.digest);
            let width = &report.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
            for c in &report.checks {
                let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                let _ = write!(out, "{status}  {:width$}  {:>12}  {}", c.id, residual_text(&c.residual), c.anchor);
                if let Some(w) = &c.witness {
                    let _ = write!(out, "  [witness: {w}]");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "{total} checks, {failed} failed");
            for (k, v) in extra.unwrap_or_default() {
                let _ = write!(out, "{k}:\n{}", canonical(&v));
            }
            out
        }
    };
    Outcome { stdout, stderr: String::new(), code }
}
