//! Command-line front end. `run_cli` is the whole program minus process exit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::correspondence::{
    associated_hermitian, b_to_e, e_to_b, e_to_b_detailed, fmt_pivot, h_from_omega, normalize_triple,
    validate_triple, variety_build, OmegaForm, ValidationReport, VarietyB,
};
use crate::error::{Error, Result};
use crate::exterior::exterior_variety;
use crate::field::{rat_to_string, FieldContext, KElement};
use crate::io::{
    cmatrix_to_wire, parse_json, parse_z, to_json, GuFile, SiegelFile, TripleFile, VarietyFile, WireCMatrix,
};
use crate::linalg::{hermitian_signature_exact, Signature, DEFAULT_TOL};
use crate::matrix::KMatrix;
use crate::siegel::{gu_act, siegel_contains, siegel_sample, t_matrix, SiegelPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "miqf", version, about = "Siegel points, Hermitian triples and their exterior powers")]
pub struct Cli {
    /// Numerical tolerance for positivity, rank and domain checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Siegel domain membership and sampling.
    Siegel {
        #[command(subcommand)]
        command: SiegelCommand,
    },
    /// Build the variety of a Siegel point.
    Variety {
        #[command(subcommand)]
        command: VarietyCommand,
    },
    /// Convert between varieties and triples.
    Map {
        #[command(subcommand)]
        command: MapCommand,
    },
    /// Check every condition on a triple or variety file.
    Verify { file: PathBuf },
    /// Exterior powers of triples.
    Ext {
        #[command(subcommand)]
        command: ExtCommand,
    },
    /// Unitary similitude group.
    Gu {
        #[command(subcommand)]
        command: GuCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum SiegelCommand {
    Check { z_file: PathBuf },
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VarietyCommand {
    Build {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        z: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum MapCommand {
    B2e { variety_file: PathBuf },
    E2b { triple_file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ExtCommand {
    Power {
        #[arg(long)]
        k: usize,
        triple_file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GuCommand {
    Act { gamma_file: PathBuf, z_file: PathBuf },
}

#[derive(Serialize)]
struct Membership {
    n: usize,
    m: usize,
    member: bool,
    min_pivot: f64,
}

#[derive(Serialize)]
struct ExtOutput {
    #[serde(flatten)]
    triple: TripleFile,
    z: WireCMatrix,
}

#[derive(Serialize)]
struct Report {
    kind: &'static str,
    #[serde(flatten)]
    report: ValidationReport,
}

#[derive(Serialize)]
struct ErrorOutput<'a> {
    error: &'a str,
    message: String,
}

/// Result object and whether it counts as a validation success.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn success<T: Serialize>(x: &T) -> Self {
        Outcome {
            value: serde_json::to_value(x).expect("plain data serializes"),
            ok: true,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_triple(path: &Path) -> Result<TripleFile> {
    parse_json(&read(path)?, &path.display().to_string())
}

fn load_variety(path: &Path, tol: f64) -> Result<VarietyB> {
    let f: VarietyFile = parse_json(&read(path)?, &path.display().to_string())?;
    variety_build(f.ctx()?, f.n, f.r, &f.matrix()?, tol)
}

fn verify_triple(f: &TripleFile, tol: f64) -> Result<ValidationReport> {
    let e = f.triple()?;
    let mut rep = validate_triple(&e, tol);
    match normalize_triple(&e, tol).and_then(|(t, _)| t.normalized_z(tol)) {
        Ok(z) => {
            let p = siegel_contains(&z, tol)?;
            rep.push("in_domain", p.is_posdef, format!("min pivot {}", fmt_pivot(p.min_pivot)));
        }
        Err(err) => rep.push("in_domain", false, err.to_string()),
    }
    match e_to_b_detailed(&e, tol) {
        Ok(rec) => rep.push(
            "riemann_positive",
            true,
            format!("min pivot {}", fmt_pivot(rec.riemann.posdef.min_pivot)),
        ),
        Err(err) => rep.push("riemann_positive", false, err.to_string()),
    }
    Ok(rep)
}

fn verify_variety(f: &VarietyFile, tol: f64) -> Result<ValidationReport> {
    let ctx = f.ctx()?;
    let z = f.matrix()?;
    let (n, m) = (f.n, f.r - f.n);
    let mut rep = ValidationReport {
        passed: true,
        checks: Vec::new(),
    };
    let t = t_matrix(ctx, n, m);
    let skew = t.adjoint() == t.scaled(&KElement::from_int(-1));
    rep.push("t_skew", skew, if skew { "conj(T)^t = -T" } else { "conj(T)^t != -T" });
    let sig = hermitian_signature_exact(&associated_hermitian(&t)?)?;
    rep.push(
        "t_signature",
        sig == Signature::new(n, m, 0),
        format!("({}, {}, {})", sig.plus, sig.minus, sig.null),
    );
    let omega = OmegaForm::from_t(&t);
    let alt = omega.is_alternating();
    rep.push("omega_alternating", alt, if alt { "omega^t = -omega" } else { "omega is not alternating" });
    let det = omega.determinant();
    rep.push(
        "omega_nondegenerate",
        !num_traits::Zero::is_zero(&det),
        format!("det {}", rat_to_string(&det)),
    );
    match h_from_omega(&omega, &ctx) {
        Ok(h) => {
            let ok = h == KMatrix::signature_matrix(ctx, n, m);
            rep.push("omega_gram", ok, if ok { "H_L = E_{n,r-n}" } else { "H_L != E_{n,r-n}" });
        }
        Err(err) => rep.push("omega_gram", false, err.to_string()),
    }
    let p = siegel_contains(&z, tol)?;
    rep.push("in_domain", p.is_posdef, format!("min pivot {}", fmt_pivot(p.min_pivot)));
    if p.is_posdef {
        let v = variety_build(ctx, n, f.r, &z, tol)?;
        match v.riemann_form(tol) {
            Ok(rf) => rep.push(
                "riemann_positive",
                rf.is_positive(tol),
                format!("min pivot {}", fmt_pivot(rf.posdef.min_pivot)),
            ),
            Err(err) => rep.push("riemann_positive", false, err.to_string()),
        }
    } else {
        rep.push("riemann_positive", false, "skipped: z is not in the domain");
    }
    Ok(rep)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    match &cli.command {
        Command::Siegel { command } => match command {
            SiegelCommand::Check { z_file } => {
                let z = parse_z(&read(z_file)?)?;
                let p = siegel_contains(&z, tol)?;
                let out = Membership {
                    n: z.rows(),
                    m: z.cols(),
                    member: p.is_posdef,
                    min_pivot: p.min_pivot,
                };
                Ok(Outcome {
                    ok: out.member,
                    ..Outcome::success(&out)
                })
            }
            SiegelCommand::Sample { n, m } => Ok(Outcome::success(&SiegelFile::from_point(&siegel_sample(
                *n, *m, cli.seed,
            )?))),
        },
        Command::Variety {
            command: VarietyCommand::Build { delta, n, r, z },
        } => {
            let ctx = FieldContext::new(*delta)?;
            let v = variety_build(ctx, *n, *r, &parse_z(&read(z)?)?, tol)?;
            Ok(Outcome::success(&VarietyFile::from_variety(&v)))
        }
        Command::Map { command } => match command {
            MapCommand::B2e { variety_file } => {
                let v = load_variety(variety_file, tol)?;
                Ok(Outcome::success(&TripleFile::from_triple(&b_to_e(&v)?)))
            }
            MapCommand::E2b { triple_file } => {
                let e = load_triple(triple_file)?.triple()?;
                Ok(Outcome::success(&VarietyFile::from_variety(&e_to_b(&e, tol)?)))
            }
        },
        Command::Verify { file } => {
            let text = read(file)?;
            let value: Value = parse_json(&text, &file.display().to_string())?;
            let report = if value.get("gram").is_some() {
                let f: TripleFile = parse_json(&text, &file.display().to_string())?;
                Report {
                    kind: "triple",
                    report: verify_triple(&f, tol)?,
                }
            } else {
                let f: VarietyFile = parse_json(&text, &file.display().to_string())?;
                Report {
                    kind: "variety",
                    report: verify_variety(&f, tol)?,
                }
            };
            Ok(Outcome {
                ok: report.report.passed,
                ..Outcome::success(&report)
            })
        }
        Command::Ext {
            command: ExtCommand::Power { k, triple_file },
        } => {
            let e = load_triple(triple_file)?.triple()?;
            let x = exterior_variety(&e, *k, tol)?;
            let z = x.normalized_z(tol)?;
            Ok(Outcome::success(&ExtOutput {
                triple: TripleFile::from_triple(&x),
                z: cmatrix_to_wire(&z),
            }))
        }
        Command::Gu {
            command: GuCommand::Act { gamma_file, z_file },
        } => {
            let g: GuFile = parse_json(&read(gamma_file)?, &gamma_file.display().to_string())?;
            let g = g.element()?;
            let z = SiegelPoint::new(parse_z(&read(z_file)?)?, tol)?;
            Ok(Outcome::success(&SiegelFile::from_point(&gu_act(&g, &z, tol)?)))
        }
    }
}

/// Line-oriented rendering of a result object.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = value else {
        return format!("{value}\n");
    };
    for (key, v) in map {
        match (key.as_str(), v) {
            ("checks", Value::Array(checks)) => {
                for c in checks {
                    let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                    let name = c["name"].as_str().unwrap_or("?");
                    let detail = c["detail"].as_str().unwrap_or("");
                    out.push_str(&format!("[{mark}] {name}: {detail}\n"));
                }
            }
            (_, Value::Array(rows)) if rows.iter().all(Value::is_array) => {
                out.push_str(&format!("{key}:\n"));
                for row in rows {
                    let cells: Vec<String> = row.as_array().into_iter().flatten().map(render_cell).collect();
                    out.push_str(&format!("  {}\n", cells.join("  ")));
                }
            }
            (_, Value::String(s)) => out.push_str(&format!("{key}: {s}\n")),
            _ => out.push_str(&format!("{key}: {v}\n")),
        }
    }
    out
}

fn render_cell(v: &Value) -> String {
    if let (Some(re), Some(im)) = (v.get("re").and_then(Value::as_f64), v.get("im").and_then(Value::as_f64)) {
        return format!("{re}{}{}i", if im < 0.0 || (im == 0.0 && im.is_sign_negative()) { "-" } else { "+" }, im.abs());
    }
    if let (Some(a), Some(b)) = (v.get("a"), v.get("b")) {
        let s = |x: &Value| x.as_str().map_or_else(|| x.to_string(), str::to_string);
        return format!("{}+({})w", s(a), s(b));
    }
    v.to_string()
}

fn emit(out: &mut dyn Write, value: &Value, format: OutputFormat) {
    let text = match format {
        OutputFormat::Json => to_json(value) + "\n",
        OutputFormat::Text => render_text(value),
    };
    let _ = out.write_all(text.as_bytes());
}

/// Runs one invocation; `args` excludes the program name. Returns the exit code.
pub fn run_cli<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("miqf")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        let _ = writeln!(stderr, "error: --tol must be a positive number, got {}", cli.tol);
        return 2;
    }
    match execute(&cli) {
        Ok(outcome) => {
            emit(stdout, &outcome.value, cli.format);
            if outcome.ok {
                0
            } else {
                let _ = writeln!(stderr, "validation failed");
                1
            }
        }
        Err(err) => {
            let out = ErrorOutput {
                error: err.kind(),
                message: err.to_string(),
            };
            emit(stdout, &serde_json::to_value(&out).expect("plain data"), cli.format);
            let _ = writeln!(stderr, "error: {err}");
            if err.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}
