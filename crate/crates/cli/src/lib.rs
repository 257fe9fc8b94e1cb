//! Command-line front end for `normgeom`.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text destined for standard output and standard error, so the binary is a
//! thin wrapper and tests can drive the grammar in-process.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use normgeom::geometry;
use normgeom::lab::{self, SuiteReport};
use normgeom::{GeomError, LinearOperator, SpaceSpec};
use serde_json::{json, Value};

pub mod json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_RELATION_FAILS: u8 = 1;
pub const EXIT_SUITE_FAILURES: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INPUT: u8 = 65;

/// Seed used when neither `--seed` nor `GEOM_SEED` is given.
pub const DEFAULT_SEED: u64 = 2019;

#[derive(Debug, Parser)]
#[command(name = "normgeom", version, about = "Orthogonality, parallelism and norm attainment in finite-dimensional normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relation {
    Birkhoff,
    Strong,
    Parallel,
    ApproxOrth,
    ApproxPar,
    Semirotund,
    Exposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(name = "th2_3")]
    ParallelAttainment,
    #[value(name = "th2_8")]
    StrictConvexity,
    #[value(name = "th2_9")]
    Nilpotent,
    #[value(name = "th2_11")]
    Idempotent,
    #[value(name = "th3_6")]
    OrthogonalitySplit,
    Transfer,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a relation between vectors of a space.
    Check {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        /// Directions tried by the semi-rotund search.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Operator norm of a linear operator.
    Opnorm {
        #[arg(long)]
        op: PathBuf,
    },
    /// Unit vectors attaining the operator norm, clustered into components.
    Attain {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Also write the points as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run randomized property suites.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Trials per suite; defaults to each suite's standard size.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Add wall-clock time to each report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the fixed named instances.
    Reproduce {
        /// Run only the sub-check with this letter (a..j).
        #[arg(long)]
        only: Option<char>,
        #[arg(long)]
        timing: bool,
    },
    /// CSV data for plotting.
    Dump {
        #[command(subcommand)]
        what: Dump,
    },
}

#[derive(Debug, Subcommand)]
enum Dump {
    /// Points of the unit sphere.
    Sphere {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// λ ↦ ‖x + λy‖ on a grid.
    Curve {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// a:b:steps, sampling steps + 1 points from a to b.
        #[arg(long, allow_hyphen_values = true)]
        lambda_range: String,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Fail {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Fail {
    Fail { code: EXIT_USAGE, message: message.into() }
}

fn input(message: impl Into<String>) -> Fail {
    Fail { code: EXIT_INPUT, message: message.into() }
}

fn geom(e: GeomError) -> Fail {
    input(e.to_string())
}

type Step = Result<(u8, String), Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<SpaceSpec, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_operator(path: &Path) -> Result<LinearOperator, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn parse_vector(text: &str, space: &SpaceSpec, name: &str) -> Result<Vec<f64>, Fail> {
    let v = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input(format!("--{name} {text:?}: {e}")))?;
    if v.len() != space.dim() {
        return Err(input(format!("--{name} has {} coordinates but the space has dimension {}", v.len(), space.dim())));
    }
    if v.iter().any(|a| !a.is_finite()) {
        return Err(input(format!("--{name} has a non-finite coordinate")));
    }
    Ok(v)
}

fn resolve_seed(seed: Option<u64>, env: Option<String>) -> Result<u64, Fail> {
    match (seed, env) {
        (Some(s), _) => Ok(s),
        (None, Some(e)) => e.trim().parse().map_err(|_| usage(format!("GEOM_SEED={e:?} is not an unsigned integer"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn check(space: &Path, relation: Relation, x: &str, y: Option<&str>, eps: Option<f64>, budget: usize) -> Step {
    let needs_y = !matches!(relation, Relation::Semirotund | Relation::Exposed);
    let needs_eps = matches!(relation, Relation::ApproxOrth | Relation::ApproxPar);
    if needs_y && y.is_none() {
        return Err(usage("this relation needs --y"));
    }
    if needs_eps && eps.is_none() {
        return Err(usage("this relation needs --eps"));
    }
    if let Some(e) = eps {
        if !(0.0..1.0).contains(&e) {
            return Err(usage("--eps must lie in [0, 1)"));
        }
    }
    let s = load_space(space)?;
    let x = parse_vector(x, &s, "x")?;
    let y = y.map(|t| parse_vector(t, &s, "y")).transpose()?;
    let y = y.as_deref().unwrap_or(&[]);
    let eps = eps.unwrap_or(0.0);
    let (name, v) = match relation {
        Relation::Birkhoff => ("birkhoff", geometry::is_birkhoff(&s, &x, y)),
        Relation::Strong => ("strong", geometry::is_strong_birkhoff(&s, &x, y)),
        Relation::Parallel => ("parallel", geometry::is_parallel(&s, &x, y)),
        Relation::ApproxOrth => ("approx-orth", geometry::is_approx_birkhoff(&s, &x, y, eps)),
        Relation::ApproxPar => ("approx-par", geometry::is_approx_parallel(&s, &x, y, eps)),
        Relation::Semirotund => ("semirotund", geometry::is_semi_rotund_point(&s, &x, budget)),
        Relation::Exposed => ("exposed", geometry::is_exposed_point(&s, &x)),
    };
    let v = v.map_err(geom)?;
    let code = if v.holds { EXIT_OK } else { EXIT_RELATION_FAILS };
    Ok((code, json::to_string(&json::verdict(name, &v))))
}

fn attain(op: &Path, tol: f64, csv_path: Option<&Path>) -> Step {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage("--tol must lie in (0, 1)"));
    }
    let t = load_operator(op)?;
    let m = t.attainment_set(tol).map_err(geom)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let dim = t.domain().dim();
        let mut header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        header.extend(["value".to_string(), "component".to_string()]);
        let io = |e: csv::Error| input(format!("{}: {e}", path.display()));
        w.write_record(&header).map_err(io)?;
        for ((p, v), l) in m.points.iter().zip(&m.values).zip(&m.labels) {
            let mut row: Vec<String> = p.iter().map(|a| json::format_float(*a)).collect();
            row.push(json::format_float(*v));
            row.push(l.to_string());
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok((EXIT_OK, json::to_string(&json::attainment(&m))))
}

fn suite_reports(suite: Suite, trials: Option<usize>, seed: u64, timing: bool) -> Result<Vec<SuiteReport>, Fail> {
    let chosen: Vec<Suite> = match suite {
        Suite::All => vec![Suite::ParallelAttainment, Suite::StrictConvexity, Suite::Nilpotent, Suite::Idempotent, Suite::OrthogonalitySplit, Suite::Transfer],
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in chosen {
        let start = Instant::now();
        let r = match s {
            Suite::ParallelAttainment => lab::check_parallel_attainment(
                trials.unwrap_or(500),
                seed,
                &[SpaceSpec::l1(3), SpaceSpec::linf(3), SpaceSpec::l2(3), SpaceSpec::stadium2()],
            ),
            Suite::StrictConvexity => lab::check_strict_convexity_parallelism(trials.unwrap_or(1000), seed),
            Suite::Nilpotent => lab::check_nilpotent_nonparallel(trials.unwrap_or(100), seed),
            Suite::Idempotent => lab::check_idempotent_ranges(trials.unwrap_or(200), seed),
            Suite::OrthogonalitySplit => lab::check_orthogonality_split(
                trials.unwrap_or(100),
                seed,
                &[SpaceSpec::l1(3), SpaceSpec::linf(3), SpaceSpec::stadium2()],
            ),
            Suite::Transfer => lab::check_monotone_transfer(trials.unwrap_or(500), seed),
            Suite::All => unreachable!("expanded above"),
        };
        let mut r = r.map_err(geom)?;
        if timing {
            r.elapsed = Some(start.elapsed());
        }
        out.push(r);
    }
    Ok(out)
}

fn verify(suite: Suite, trials: Option<usize>, seed: u64, timing: bool) -> Step {
    let reports = suite_reports(suite, trials, seed, timing)?;
    let ok = reports.iter().all(SuiteReport::ok);
    let doc = if suite == Suite::All {
        json!({ "ok": ok, "reports": reports.iter().map(json::report).collect::<Vec<Value>>() })
    } else {
        json::report(&reports[0])
    };
    Ok((if ok { EXIT_OK } else { EXIT_SUITE_FAILURES }, json::to_string(&doc)))
}

fn reproduce(only: Option<char>, timing: bool) -> Step {
    if let Some(c) = only {
        if !lab::SUBCHECKS.iter().any(|(l, _)| *l == c) {
            return Err(usage(format!("--only {c:?}: expected a letter in a..j")));
        }
    }
    let start = Instant::now();
    let mut r = lab::reproduce_examples(only).map_err(geom)?;
    if timing {
        r.elapsed = Some(start.elapsed());
    }
    Ok((if r.ok() { EXIT_OK } else { EXIT_SUITE_FAILURES }, json::to_string(&json::report(&r))))
}

fn csv_text(header: &[String], rows: &[Vec<f64>]) -> Result<String, Fail> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| input(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|a| json::format_float(*a))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_range(text: &str) -> Result<(f64, f64, usize), Fail> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("--lambda-range {text:?}: expected a:b:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() || !(a < b) || steps == 0 {
        return Err(usage(format!("--lambda-range {text:?}: need finite a < b and steps ≥ 1")));
    }
    Ok((a, b, steps))
}

fn dump(what: &Dump) -> Step {
    match what {
        Dump::Sphere { space, resolution } => {
            if *resolution == 0 {
                return Err(usage("--resolution must be positive"));
            }
            let s = load_space(space)?;
            let pts = s.sphere_sample(*resolution).map_err(geom)?;
            let header: Vec<String> = (0..s.dim()).map(|i| format!("x{i}")).collect();
            Ok((EXIT_OK, csv_text(&header, &pts)?))
        }
        Dump::Curve { space, x, y, lambda_range } => {
            let (a, b, steps) = parse_range(lambda_range)?;
            let s = load_space(space)?;
            let x = parse_vector(x, &s, "x")?;
            let y = parse_vector(y, &s, "y")?;
            let mut rows = Vec::with_capacity(steps + 1);
            for k in 0..=steps {
                let l = a + (b - a) * k as f64 / steps as f64;
                let p: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u + l * v).collect();
                rows.push(vec![l, s.norm_eval(&p).map_err(geom)?]);
            }
            Ok((EXIT_OK, csv_text(&["lambda".into(), "norm".into()], &rows)?))
        }
    }
}

/// Runs one invocation. `args` includes the program name, as in `std::env::args_os`.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var("GEOM_SEED").ok())
}

/// [`run`] with the value of `GEOM_SEED` passed explicitly.
pub fn run_with_env<I, T>(args: I, geom_seed: Option<String>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Output { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Output { code: EXIT_USAGE, stdout: String::new(), stderr: e.to_string() },
            };
        }
    };
    let step = match &cli.command {
        Command::Check { space, relation, x, y, eps, budget } => check(space, *relation, x, y.as_deref(), *eps, *budget),
        Command::Opnorm { op } => {
            load_operator(op).map(|t| (EXIT_OK, json::to_string(&json::operator_norm(&t.operator_norm()))))
        }
        Command::Attain { op, tol, csv } => attain(op, *tol, csv.as_deref()),
        Command::Verify { suite, trials, seed, timing } => {
            resolve_seed(*seed, geom_seed).and_then(|s| verify(*suite, *trials, s, *timing))
        }
        Command::Reproduce { only, timing } => reproduce(*only, *timing),
        Command::Dump { what } => dump(what),
    };
    match step {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(f) => Output { code: f.code, stdout: String::new(), stderr: format!("normgeom: {}\n", f.message) },
    }
}
