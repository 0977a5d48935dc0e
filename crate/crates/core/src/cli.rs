//! The `opradius` command line.
//!
//! Results go to the output stream as JSON or CSV; everything meant for a
//! person goes to the error stream. Exit codes: 0 success, 1 computation
//! error (or a campaign with violations), 2 usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{list_bounds, BoundId, BoundResult, Evaluator, Inputs, Params, Signature, Target};
use crate::error::Error;
use crate::harness::{
    emit_report, report_to_string, run_campaign_with_threads, EnsembleKind, EnsembleSpec, PropertySelection,
    ReportFormat, VerificationReport,
};
use crate::matcore::{parse_matrix_json, spectral_norm, CMatrix, MatrixJson};
use crate::radii::{default_tolerance, euclidean_radius, numerical_radius, Enclosure};
use crate::transforms::{aluthge_t, offdiag_block};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "opradius", version, about = "Numerical radius enclosures and operator inequality bounds")]
struct Cli {
    /// Print the bound registry as JSON and exit.
    #[arg(long, global = true)]
    list_bounds: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified enclosure of w(T) or w_e(B, C).
    Compute(ComputeArgs),
    /// Evaluate registered bounds next to the reference enclosures.
    Bounds(BoundsArgs),
    /// Run a verification campaign over one ensemble.
    Verify(VerifyArgs),
    /// The t-Aluthge transform of a matrix.
    Aluthge(AluthgeArgs),
    /// The block matrix [[0, X], [Y, 0]].
    Offdiag(OffdiagArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    W,
    We,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Matrix JSON file (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "w")]
    quantity: Quantity,
    /// Second matrix, required for `we`.
    #[arg(long)]
    input2: Option<PathBuf>,
    /// Absolute enclosure width; defaults to 1e-8 * max(1, scale).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["x", "y"])]
    input2: Option<PathBuf>,
    #[arg(long, requires = "y")]
    x: Option<PathBuf>,
    #[arg(long, requires = "x")]
    y: Option<PathBuf>,
    /// `all` or a comma-separated list of bound ids.
    #[arg(long, default_value = "all")]
    set: String,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// ginibre, hermitian, normal, unitary, nilpotent_shift,
    /// rank_deficient[(k)], diagonal or scaled(base,re,im).
    #[arg(long, default_value = "ginibre")]
    ensemble: String,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the full report here; the summary then goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `all` or a comma-separated list of properties.
    #[arg(long, default_value = "all")]
    properties: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct AluthgeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Also enclose the numerical radius of the transform.
    #[arg(long)]
    radius: bool,
}

#[derive(Debug, Args)]
struct OffdiagArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
}

enum Failure {
    Usage(String),
    Compute(String),
    /// Output was produced but the verdict is negative.
    Verdict {
        output: String,
        message: String,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ParameterOutOfRange { .. } | Error::WrongInputShape { .. } | Error::InvalidTolerance(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs the command line on `args` (including the program name) and returns
/// the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let start = Instant::now();
    let result = if cli.list_bounds {
        Ok(format!("{}\n", serde_json::to_string_pretty(&list_bounds()).expect("registry serialises")))
    } else {
        match cli.command {
            None => Err(Failure::Usage("no subcommand given (try --help)".into())),
            Some(Command::Compute(a)) => compute(a),
            Some(Command::Bounds(a)) => bounds(a),
            Some(Command::Verify(a)) => verify(a, err, start),
            Some(Command::Aluthge(a)) => aluthge(a),
            Some(Command::Offdiag(a)) => offdiag(a),
        }
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "done in {:.3}s", start.elapsed().as_secs_f64());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_COMPUTE
        }
        Err(Failure::Verdict { output, message }) => {
            let _ = out.write_all(output.as_bytes());
            let _ = writeln!(err, "{message}");
            EXIT_COMPUTE
        }
    }
}

fn load(flag: &str, path: &Path) -> std::result::Result<CMatrix, Failure> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Usage(format!("--{flag} {}: {e}", path.display())))?;
    parse_matrix_json(&text).map_err(|e| Failure::Usage(format!("--{flag} {}: {e}", path.display())))
}

fn same_dim(a: &CMatrix, b: &CMatrix, flags: &str) -> std::result::Result<(), Failure> {
    if a.n() != b.n() {
        return Err(Failure::Usage(format!("{flags} must have the same dimension ({} vs {})", a.n(), b.n())));
    }
    Ok(())
}

fn check_range(flag: &str, v: f64, lo: f64, hi: f64) -> std::result::Result<(), Failure> {
    if !(lo..=hi).contains(&v) {
        return Err(Failure::Usage(format!("--{flag} {v} is outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn check_tol(tol: Option<f64>) -> std::result::Result<(), Failure> {
    match tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Failure::Usage(format!("--tol {t} must be positive and finite"))),
        _ => Ok(()),
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    format!("{}\n", serde_json::to_string(v).expect("results serialise"))
}

fn compute(a: ComputeArgs) -> Outcome {
    check_tol(a.tol)?;
    let t = load("input", &a.input)?;
    let enc = match (a.quantity, &a.input2) {
        (Quantity::W, Some(_)) => return Err(Failure::Usage("--input2 is only used with --quantity we".into())),
        (Quantity::W, None) => numerical_radius(&t, a.tol.unwrap_or_else(|| default_tolerance(spectral_norm(&t))))?,
        (Quantity::We, None) => return Err(Failure::Usage("--quantity we needs --input2".into())),
        (Quantity::We, Some(p)) => {
            let c = load("input2", p)?;
            same_dim(&t, &c, "--input and --input2")?;
            let scale = spectral_norm(&t).max(spectral_norm(&c));
            euclidean_radius(&t, &c, a.tol.unwrap_or_else(|| default_tolerance(scale)))?
        }
    };
    Ok(match a.format {
        Format::Json => json_line(&json!({ "lower": enc.lower, "upper": enc.upper, "witness": enc.witness })),
        Format::Csv => format!("lower,upper\n{},{}\n", enc.lower, enc.upper),
    })
}

#[derive(Serialize)]
struct Reference {
    lower: f64,
    upper: f64,
}

impl From<&Enclosure> for Reference {
    fn from(e: &Enclosure) -> Self {
        Reference { lower: e.lower, upper: e.upper }
    }
}

fn bounds(a: BoundsArgs) -> Outcome {
    check_range("t", a.t, 0.0, 1.0)?;
    check_range("r", a.r, 1.0, 2.0)?;
    let ids: Vec<BoundId> = if a.set.trim() == "all" {
        BoundId::ALL.to_vec()
    } else {
        a.set
            .split(',')
            .map(|s| s.trim().parse::<BoundId>().map_err(|e| Failure::Usage(format!("--set: {e}"))))
            .collect::<std::result::Result<_, _>>()?
    };
    if ids.is_empty() {
        return Err(Failure::Usage("--set selects no bounds".into()));
    }
    let t = a.input.as_deref().map(|p| load("input", p)).transpose()?;
    let c = a.input2.as_deref().map(|p| load("input2", p)).transpose()?;
    let x = a.x.as_deref().map(|p| load("x", p)).transpose()?;
    let y = a.y.as_deref().map(|p| load("y", p)).transpose()?;
    if let (Some(t), Some(c)) = (&t, &c) {
        same_dim(t, c, "--input and --input2")?;
    }
    if let (Some(x), Some(y)) = (&x, &y) {
        same_dim(x, y, "--x and --y")?;
    }
    // off-diagonal ids read (X, Y), falling back to (input, input2)
    let xy = x.as_ref().zip(y.as_ref()).or(t.as_ref().zip(c.as_ref()));
    let explicit = a.set.trim() != "all";

    let params = Params { t: a.t, r: a.r };
    let ev = Evaluator::new();
    let mut rows: Vec<BoundResult> = Vec::new();
    let mut skipped = Vec::new();
    for id in ids {
        let inputs = match id.signature() {
            s if s.is_single() => t.as_ref().map(Inputs::Single),
            Signature::XY => xy.map(|(x, y)| Inputs::Pair(x, y)),
            _ => t.as_ref().zip(c.as_ref()).map(|(b, c)| Inputs::Pair(b, c)),
        };
        let Some(inputs) = inputs else {
            if explicit {
                return Err(Failure::Usage(format!("bound {id} needs inputs {}", id.signature().as_str())));
            }
            skipped.push(id.name().to_string());
            continue;
        };
        match ev.evaluate(id, inputs, &params) {
            Ok(r) => rows.push(r),
            Err(Error::NotApplicable { .. }) if !explicit => skipped.push(id.name().to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() {
        return Err(Failure::Usage("no bound could be evaluated with the given inputs".into()));
    }

    let mut references: BTreeMap<&str, Reference> = BTreeMap::new();
    for target in [Target::W, Target::We, Target::WOffdiag] {
        if !rows.iter().any(|r| r.target == target) {
            continue;
        }
        let enc = match target {
            Target::W => {
                let t = t.as_ref().expect("w bounds read --input");
                numerical_radius(t, default_tolerance(spectral_norm(t)))?
            }
            Target::We => {
                let (b, c) = (t.as_ref().expect("pair bounds"), c.as_ref().expect("pair bounds"));
                euclidean_radius(b, c, default_tolerance(spectral_norm(b).max(spectral_norm(c))))?
            }
            Target::WOffdiag => {
                let (x, y) = xy.expect("off-diagonal bounds read a pair");
                let m = offdiag_block(x, y)?;
                numerical_radius(&m, default_tolerance(spectral_norm(&m)))?
            }
        };
        references.insert(target.as_str(), Reference::from(&enc));
    }

    Ok(match a.format {
        Format::Json => json_line(&json!({
            "params": params,
            "bounds": rows,
            "references": references,
            "skipped": skipped,
        })),
        Format::Csv => {
            let mut s = String::from("bound,kind,target,value,upper,uncertainty,reference_lower,reference_upper\n");
            for r in &rows {
                let rf = &references[r.target.as_str()];
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.id,
                    r.kind,
                    r.target,
                    r.value,
                    r.upper.map(|u| u.to_string()).unwrap_or_default(),
                    r.uncertainty(),
                    rf.lower,
                    rf.upper
                )
                .expect("writing to a string");
            }
            s
        }
    })
}

fn verify(a: VerifyArgs, err: &mut dyn Write, start: Instant) -> Outcome {
    let kind: EnsembleKind = a.ensemble.parse().map_err(|e: Error| Failure::Usage(format!("--ensemble: {e}")))?;
    let props: PropertySelection =
        a.properties.parse().map_err(|e: Error| Failure::Usage(format!("--properties: {e}")))?;
    if props.is_empty() {
        return Err(Failure::Usage("--properties selects nothing".into()));
    }
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if a.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let spec = EnsembleSpec::new(kind, a.dim, a.seed, a.trials);
    spec.validate().map_err(|e| Failure::Usage(format!("--dim/--ensemble: {e}")))?;

    let threads = a.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = run_campaign_with_threads(&[spec], &props, threads)?;
    let format = match a.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    summarise(&report, err, start);
    let text = match &a.out {
        Some(path) => {
            emit_report(&report, format, path)?;
            json_line(&report.summary)
        }
        None => report_to_string(&report, format)?,
    };
    if report.is_clean() {
        Ok(text)
    } else {
        Err(Failure::Verdict {
            output: text,
            message: format!(
                "campaign not clean: {} violation(s), {} error(s)",
                report.summary.violation_count,
                report.summary.error_count + report.summary.spec_errors.len()
            ),
        })
    }
}

fn summarise(report: &VerificationReport, err: &mut dyn Write, start: Instant) {
    let s = &report.summary;
    let _ = writeln!(
        err,
        "{} trials, {} bound evaluations, {} violations, {} warnings, {} errors in {:.1}s",
        s.trials,
        s.bound_evaluations,
        s.violation_count,
        s.warning_count,
        s.error_count,
        start.elapsed().as_secs_f64()
    );
    for (p, n) in &s.violations_by_property {
        let _ = writeln!(err, "  violated {p}: {n}");
    }
}

fn aluthge(a: AluthgeArgs) -> Outcome {
    check_range("t", a.t, 0.0, 1.0)?;
    let t = load("input", &a.input)?;
    let m = aluthge_t(&t, a.t)?;
    let mut v = json!({ "t": a.t, "matrix": MatrixJson::from(&m), "norm": spectral_norm(&m) });
    if a.radius {
        let enc = numerical_radius(&m, default_tolerance(spectral_norm(&m)))?;
        v["numerical_radius"] = json!(Reference::from(&enc));
    }
    Ok(json_line(&v))
}

fn offdiag(a: OffdiagArgs) -> Outcome {
    let x = load("x", &a.x)?;
    let y = load("y", &a.y)?;
    same_dim(&x, &y, "--x and --y")?;
    Ok(json_line(&MatrixJson::from(&offdiag_block(&x, &y)?)))
}
