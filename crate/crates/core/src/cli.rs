//! Command-line driver.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed (the failing
//! statement ids go to stderr) or a computation broke down, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bvp::{fd_derivative, solve_linear, solve_origin, solve_riccati, BvpSolution, Eta, OdeSolution, FD_STEP};
use crate::config::{load_density, load_shape};
use crate::density::{Density, RhoFunction};
use crate::error::{Error, Result};
use crate::geometry::{kernel_for, symmetrize, Limit, ShapeUnion};
use crate::isoperimetry::{compete, profile_value_for, CompeteOptions};
use crate::kernel::DEFAULT_EPS;
use crate::random::DEFAULT_SEED;
use crate::report::{self, fmt_num, Record};
use crate::suites::{run_suite, Suite, SuiteOptions, DISC_REL, GAP_TOL, RESIDUAL_TOL};

const SEED_HELP: &str = "Seed of the random streams [default: 20240917]";

#[derive(Debug, Parser)]
#[command(name = "isolab", version, about = "Weighted isoperimetry with radial log-convex densities")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    /// `u' + (1/x + rho) u + λ = 0` with end signs `--eta`.
    Linear,
    /// `w' + λ w² = (1/x + rho) w`, `w(a) = w(b) = 1`.
    Riccati,
    /// The linear problem with `u(0) = 0`, `u(b) = 1`.
    Origin,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Isoperimetric profile I_f(v) and the ball radius.
    Profile {
        #[arg(long)]
        density: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        v: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Search unions of centered annuli of volume v against the ball.
    Compete {
        #[arg(long)]
        density: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        v: f64,
        /// Number of annuli.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, help = SEED_HELP)]
        seed: Option<u64>,
        /// Largest allowed P_f(best) - I_f(v) below zero.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the optimizer trace as CSV to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate the solution of a boundary-value problem with its residual.
    Ode {
        /// Density whose log-slope is the coefficient; flat when omitted.
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "linear")]
        problem: Problem,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        a: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
        b: f64,
        /// End signs of the linear problem, e.g. "1,-1".
        #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
        eta: String,
        /// Number of tabulated points.
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a seeded verification suite.
    #[command(long_about = "Run a seeded verification suite.\n\n\
        Random coefficients are nondecreasing step functions on a random interval \
        0.1 <= a < b <= 10: up to 8 jumps at uniform positions, a first level that \
        is 0 or Exp(1) with equal odds, and Exp(1) increments. When a sample breaks \
        a hypothesis of the statement under test its levels are halved until it \
        holds. --density fixes the coefficient to the density's log-slope, --a and \
        --b fix the interval.\n\n\
        Rows go to --out (stdout by default); per-statement summaries are JSON \
        lines and go to --summary (stdout by default, after the rows).")]
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        /// Number of instances; the suite's own count by default.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, help = SEED_HELP)]
        seed: Option<u64>,
        /// Tolerance of the suite's headline statement.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the summary records here instead of stdout.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Spherical cap symmetrization of a shape: perimeters and the L(τ) table.
    Symmetrize {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        density: PathBuf,
        /// Relative allowance for volume and perimeter changes.
        #[arg(long)]
        tol: Option<f64>,
        /// Radii of the L(τ) table.
        #[arg(long, default_value_t = 65)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Profile {
        density: PathBuf,
        v: f64,
        out: Option<PathBuf>,
        format: Format,
    },
    Compete {
        density: PathBuf,
        v: f64,
        n: usize,
        trials: usize,
        seed: u64,
        tol: f64,
        trace: Option<PathBuf>,
        out: Option<PathBuf>,
        format: Format,
    },
    Ode {
        density: Option<PathBuf>,
        problem: Problem,
        a: f64,
        b: f64,
        eta: Eta,
        points: usize,
        tol: f64,
        out: Option<PathBuf>,
        format: Format,
    },
    Verify {
        suite: Suite,
        density: Option<PathBuf>,
        interval: Option<(f64, f64)>,
        trials: Option<usize>,
        seed: u64,
        tol: Option<f64>,
        summary: Option<PathBuf>,
        out: Option<PathBuf>,
        format: Format,
    },
    Symmetrize {
        shape: PathBuf,
        density: PathBuf,
        tol: f64,
        points: usize,
        out: Option<PathBuf>,
        format: Format,
    },
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Input(format!("{name} must be positive, got {x}")))
    }
}

fn positive_tol(x: Option<f64>, default: f64) -> Result<f64> {
    positive("tol", x.unwrap_or(default))
}

fn at_least(name: &str, x: usize, min: usize) -> Result<usize> {
    if x >= min {
        Ok(x)
    } else {
        Err(Error::Input(format!("{name} must be at least {min}, got {x}")))
    }
}

/// Parses and validates `argv` (including the program name). Help and
/// version requests come back as [`Error::Input`] carrying the rendered text;
/// [`main`] prints those and exits 0.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Input(e.render().to_string()))?;
    Ok(match cli.command {
        Cmd::Profile { density, v, output } => RunConfig::Profile {
            density,
            v: positive("v", v)?,
            out: output.out,
            format: output.format.unwrap_or(Format::Json),
        },
        Cmd::Compete { density, v, n, trials, seed, tol, trace, output } => RunConfig::Compete {
            density,
            v: positive("v", v)?,
            n: at_least("n", n, 1)?,
            trials: at_least("trials", trials, 1)?,
            seed: seed.unwrap_or(DEFAULT_SEED),
            tol: positive_tol(tol, GAP_TOL)?,
            trace,
            out: output.out,
            format: output.format.unwrap_or(Format::Json),
        },
        Cmd::Ode { density, problem, a, b, eta, points, tol, output } => {
            if problem == Problem::Origin && a != 0.0 {
                return Err(Error::Input(format!("the origin problem starts at a = 0, got a = {a}")));
            }
            if !(a >= 0.0 && a < b && b.is_finite()) {
                return Err(Error::Input(format!("need 0 <= a < b, got a = {a}, b = {b}")));
            }
            if problem != Problem::Origin && a == 0.0 {
                return Err(Error::Input("a must be positive".into()));
            }
            RunConfig::Ode {
                density,
                problem,
                a,
                b,
                eta: eta.parse()?,
                points: at_least("points", points, 2)?,
                tol: positive_tol(tol, RESIDUAL_TOL)?,
                out: output.out,
                format: output.format.unwrap_or(Format::Csv),
            }
        }
        Cmd::Verify { suite, density, a, b, trials, seed, tol, summary, output } => {
            let interval = match (a, b) {
                (None, None) => None,
                (Some(a), Some(b)) if a > 0.0 && a < b && b.is_finite() => Some((a, b)),
                (Some(a), Some(b)) => return Err(Error::Input(format!("need 0 < a < b, got a = {a}, b = {b}"))),
                _ => return Err(Error::Input("--a and --b go together".into())),
            };
            RunConfig::Verify {
                suite,
                density,
                interval,
                trials: trials.map(|t| at_least("trials", t, 1)).transpose()?,
                seed: seed.unwrap_or(DEFAULT_SEED),
                tol: tol.map(|t| positive("tol", t)).transpose()?,
                summary,
                out: output.out,
                format: output.format.unwrap_or(Format::Csv),
            }
        }
        Cmd::Symmetrize { shape, density, tol, points, output } => RunConfig::Symmetrize {
            shape,
            density,
            tol: positive_tol(tol, DISC_REL)?,
            points: at_least("points", points, 2)?,
            out: output.out,
            format: output.format.unwrap_or(Format::Csv),
        },
    })
}

/// What a run produced: the report text and the failing statement ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub report: String,
    /// Text for a second destination (verify summaries), if any.
    pub summary: Option<String>,
    pub failures: Vec<String>,
}

fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Csv => report::to_csv(records),
        Format::Json => Ok(report::to_json_lines(records)),
    }
}

/// CSV with a leading `# key=value, ...` line, or JSON lines with the
/// metadata as the first object.
fn render_with_meta(meta: &Record, rows: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let line = meta.0.iter().map(|(k, v)| format!("{k}={}", field_text(v))).collect::<Vec<_>>().join(", ");
            Ok(format!("# {line}\n{}", report::to_csv(rows)?))
        }
        Format::Json => {
            let mut all = vec![meta.clone()];
            all.extend_from_slice(rows);
            Ok(report::to_json_lines(&all))
        }
    }
}

fn field_text(f: &report::Field) -> String {
    use report::Field;
    match f {
        Field::Num(x) => fmt_num(*x),
        Field::Nums(xs) => xs.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";"),
        Field::Int(i) => i.to_string(),
        Field::Str(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn coefficient(density: Option<&Path>, a: f64, b: f64) -> Result<RhoFunction> {
    match density {
        Some(p) => RhoFunction::from_density(&load_density(p)?, a, b),
        None => RhoFunction::constant(a, b, 0.0),
    }
}

/// Executes a validated configuration without touching stdout.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg {
        RunConfig::Profile { density, v, format, .. } => {
            let d = load_density(density)?;
            let p = profile_value_for(&d, *v, DEFAULT_EPS)?;
            let tol = 1e-9 * (1.0 + p.perimeter);
            let rec = Record::new()
                .with("statement", "isoperimetric-profile")
                .with("tol", tol)
                .with("v", p.v)
                .with("r", p.r)
                .with("I_f", p.perimeter)
                .with("consistency", p.consistency)
                .with("passed", p.consistency <= tol);
            let failures = if p.consistency <= tol { vec![] } else { vec!["isoperimetric-profile".to_string()] };
            Ok(Outcome { report: render(&[rec], *format)?, summary: None, failures })
        }
        RunConfig::Compete { density, v, n, trials, seed, tol, trace, format, .. } => {
            let d = load_density(density)?;
            let r = compete(
                &d,
                *v,
                CompeteOptions { n: *n, trials: *trials, seed: *seed, eps: DEFAULT_EPS, trace: trace.is_some() },
            )?;
            let passed = r.gap >= -tol && r.superadditivity_holds;
            let rec = Record::new()
                .with("statement", "annuli-gap")
                .with("tol", *tol)
                .with("v", r.v)
                .with("r", r.r)
                .with("I_f", r.ball_perimeter)
                .with("gap", r.gap)
                .with("best_perimeter", r.best_perimeter)
                .with("best_radii", r.best_radii.clone())
                .with("n", r.n)
                .with("seed", r.seed)
                .with("trials", r.trials)
                .with("best_trial", r.best_trial)
                .with("evaluations", r.evaluations)
                .with("superadditivity_holds", r.superadditivity_holds)
                .with("max_volume_error", r.max_volume_error)
                .with("passed", passed);
            if let Some(path) = trace {
                let rows: Vec<Record> = r
                    .trace
                    .iter()
                    .map(|t| {
                        Record::new()
                            .with("statement", "annuli-gap")
                            .with("tol", *tol)
                            .with("trial", t.trial)
                            .with("iteration", t.iteration)
                            .with("perimeter", t.perimeter)
                    })
                    .collect();
                write_file(path, &report::to_csv(&rows)?)?;
            }
            let mut failures = Vec::new();
            if r.gap < -tol {
                failures.push("annuli-gap".to_string());
            }
            if !r.superadditivity_holds {
                failures.push("annuli-superadditivity".to_string());
            }
            Ok(Outcome { report: render(&[rec], *format)?, summary: None, failures })
        }
        RunConfig::Ode { density, problem, a, b, eta, points, tol, format, .. } => {
            let rho = coefficient(density.as_deref(), *a, *b)?;
            let (statement, eta_text, sol): (&str, String, Box<dyn OdeSolution>) = match problem {
                Problem::Linear => {
                    ("linear-residual", eta.to_string(), Box::new(solve_linear(&rho, *a, *b, *eta, DEFAULT_EPS)?))
                }
                Problem::Riccati => {
                    ("riccati-residual", "riccati".into(), Box::new(solve_riccati(&rho, *a, *b, DEFAULT_EPS)?))
                }
                Problem::Origin => ("origin-residual", "origin".into(), Box::new(solve_origin(&rho, *b, DEFAULT_EPS)?)),
            };
            let lambda = match problem {
                Problem::Riccati => solve_riccati(&rho, *a, *b, DEFAULT_EPS)?.lambda,
                Problem::Linear => lambda_of(solve_linear(&rho, *a, *b, *eta, DEFAULT_EPS)?),
                Problem::Origin => lambda_of(solve_origin(&rho, *b, DEFAULT_EPS)?),
            };
            let value = if *problem == Problem::Riccati { "w" } else { "u" };
            let meta = Record::new().with("lambda", lambda).with("eta", eta_text).with("a", *a).with("b", *b);
            let bps = sol.breakpoints();
            let margin = 3.0 * FD_STEP;
            let mut rows = Vec::with_capacity(*points);
            let mut failed = false;
            for j in 0..*points {
                let t = a + (b - a) * j as f64 / (*points - 1) as f64;
                let y = sol.value(t)?;
                let smooth = t - a > margin && b - t > margin && bps.iter().all(|&p| (p - t).abs() > margin);
                let res = if smooth {
                    sol.residual_at(t, y, fd_derivative(sol.as_ref(), t, FD_STEP)?)?.abs()
                } else {
                    f64::NAN
                };
                let passed = !smooth || res <= *tol;
                failed |= !passed;
                rows.push(
                    Record::new()
                        .with("statement", statement)
                        .with("tol", *tol)
                        .with("t", t)
                        .with(value, y)
                        .with("residual", res)
                        .with("skipped", !smooth)
                        .with("passed", passed),
                );
            }
            let failures = if failed { vec![statement.to_string()] } else { vec![] };
            Ok(Outcome { report: render_with_meta(&meta, &rows, *format)?, summary: None, failures })
        }
        RunConfig::Verify { suite, density, interval, trials, seed, tol, summary, format, .. } => {
            let opts = SuiteOptions {
                seed: *seed,
                instances: *trials,
                density: density.as_deref().map(load_density).transpose()?,
                interval: *interval,
                tol: *tol,
                eps: DEFAULT_EPS,
            };
            let rep = run_suite(*suite, &opts)?;
            let rows = match format {
                Format::Csv => rep.rows_csv()?,
                Format::Json => rep.rows_json(),
            };
            let sums = rep.summaries_json();
            let failures = rep.failing_statements().into_iter().map(String::from).collect();
            Ok(match summary {
                Some(_) => Outcome { report: rows, summary: Some(sums), failures },
                None => Outcome { report: format!("{rows}{sums}"), summary: None, failures },
            })
        }
        RunConfig::Symmetrize { shape, density, tol, points, format, .. } => {
            let d = load_density(density)?;
            let s = load_shape(shape)?;
            symmetrize_report(&s, &d, *tol, *points, *format)
        }
    }
}

fn lambda_of(sol: BvpSolution) -> f64 {
    sol.lambda
}

fn symmetrize_report(s: &ShapeUnion, d: &Density, rel: f64, points: usize, format: Format) -> Result<Outcome> {
    let k = kernel_for(s, d, DEFAULT_EPS)?;
    let out = symmetrize(s, &k)?;
    let ptol = rel * (1.0 + out.perimeter_before) + out.perimeter_disc;
    let vtol = rel * (1.0 + out.volume_before) + out.volume_disc;
    let p_ok = out.perimeter_after <= out.perimeter_before + ptol;
    let v_ok = (out.volume_after - out.volume_before).abs() <= vtol;
    let meta = Record::new()
        .with("statement", "symmetrization-perimeter")
        .with("tol", ptol)
        .with("perimeter_before", out.perimeter_before)
        .with("perimeter_after", out.perimeter_after)
        .with("volume_before", out.volume_before)
        .with("volume_after", out.volume_after)
        .with("volume_tol", vtol)
        .with("exact", out.exact)
        .with("passed", p_ok && v_ok);
    let hi = s.outer_radius();
    let lo = s.components.iter().map(|c| c.inner_radius()).fold(f64::INFINITY, f64::min);
    let rows: Vec<Record> = (0..points)
        .map(|j| {
            let t = lo + (hi - lo) * j as f64 / (points - 1) as f64;
            let before: f64 =
                s.components.iter().filter_map(|c| c.arc_at(t, Limit::Above)).map(|a| 2.0 * t * a.1).sum();
            let after = out.profile.length(t);
            Record::new()
                .with("statement", "symmetrization-section-length")
                .with("tol", rel * (1.0 + before))
                .with("tau", t)
                .with("L_before", before)
                .with("L_after", after)
        })
        .collect();
    let mut failures = Vec::new();
    if !p_ok {
        failures.push("symmetrization-perimeter".to_string());
    }
    if !v_ok {
        failures.push("symmetrization-volume".to_string());
    }
    Ok(Outcome { report: render_with_meta(&meta, &rows, format)?, summary: None, failures })
}

fn output_paths(cfg: &RunConfig) -> (Option<&Path>, Option<&Path>) {
    match cfg {
        RunConfig::Profile { out, .. }
        | RunConfig::Compete { out, .. }
        | RunConfig::Ode { out, .. }
        | RunConfig::Symmetrize { out, .. } => (out.as_deref(), None),
        RunConfig::Verify { out, summary, .. } => (out.as_deref(), summary.as_deref()),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_)
        | Error::InvalidDensity(_)
        | Error::InvalidRho(_)
        | Error::Domain(_)
        | Error::Shape(_)
        | Error::Hypothesis(_) => 2,
        _ => 1,
    }
}

fn apply_threads() -> Result<()> {
    let Ok(v) = std::env::var("ISOLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Input(format!("ISOLAB_THREADS must be a positive integer, got '{v}'")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a configuration, writing reports and diagnostics; returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    if let Err(e) = apply_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    let outcome = match execute(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let (out, summary) = output_paths(cfg);
    let written = (|| -> Result<()> {
        match out {
            Some(p) => write_file(p, &outcome.report)?,
            None => print_stdout(&outcome.report)?,
        }
        if let Some(text) = &outcome.summary {
            match summary {
                Some(p) => write_file(p, text)?,
                None => print_stdout(text)?,
            }
        }
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    for f in &outcome.failures {
        eprintln!("FAILED {f}");
    }
    if outcome.failures.is_empty() {
        0
    } else {
        1
    }
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::Input(format!("stdout: {e}")))
}

/// Entry point of the binary: parse, run, exit code.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        _ => {}
    }
    match parse_args(&args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.trim_end());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn parses_examples() {
        let cfg = parse_args(["isolab", "profile", "--density", "d.cfg", "--v", "2.5"]).unwrap();
        assert!(matches!(cfg, RunConfig::Profile { v, .. } if v == 2.5));
        let cfg = parse_args([
            "isolab",
            "verify",
            "--suite",
            "riccati",
            "--density",
            "d.cfg",
            "--trials",
            "200",
            "--seed",
            "7",
        ])
        .unwrap();
        assert!(matches!(cfg, RunConfig::Verify { suite: Suite::Riccati, trials: Some(200), seed: 7, .. }));
        let e = parse_args(["isolab", "compete", "--density", "d.cfg", "--v", "-1"]).unwrap_err();
        assert!(e.to_string().contains("v must be positive"), "{e}");
        assert!(parse_args(["isolab", "verify", "--suite", "nope"]).is_err());
        assert!(parse_args(["isolab", "profile", "--v", "1"]).is_err());
        let cfg = parse_args(["isolab", "ode", "--eta", "-1,1"]).unwrap();
        assert!(matches!(cfg, RunConfig::Ode { eta: Eta::MP, .. }));
    }

    #[test]
    fn flat_profile_is_two_pi() {
        let dir = tempfile::tempdir().unwrap();
        let d = write(dir.path(), "d.toml", "family = \"constant\"\n");
        let cfg = parse_args([
            "isolab",
            "profile",
            "--density",
            d.to_str().unwrap(),
            "--v",
            &std::f64::consts::PI.to_string(),
        ])
        .unwrap();
        let out = execute(&cfg).unwrap();
        assert!(out.report.contains("\"I_f\":6.28318530717959"), "{}", out.report);
        assert!(out.failures.is_empty());
    }

    #[test]
    fn ode_table_has_metadata() {
        let cfg = parse_args(["isolab", "ode", "--points", "5"]).unwrap();
        let out = execute(&cfg).unwrap();
        let mut lines = out.report.lines();
        assert_eq!(lines.next().unwrap(), "# lambda=1.0, eta=1,-1, a=1.0, b=3.0");
        assert_eq!(lines.next().unwrap(), "statement,tol,t,u,residual,skipped,passed");
        assert_eq!(out.report.lines().count(), 7);
        assert!(out.failures.is_empty());
    }

    #[test]
    fn symmetrize_reports_sections() {
        let dir = tempfile::tempdir().unwrap();
        let d = write(dir.path(), "d.toml", "family = \"linear\"\nparams = [0.5]\n");
        let s = write(
            dir.path(),
            "s.toml",
            "[[component]]\nkind = \"cap\"\nrotation = 0.5\nnodes = [[1, 0.3], [2, 0.3]]\n\n[[component]]\nkind = \"cap\"\nrotation = -1.5\nnodes = [[1, 0.2], [2, 0.2]]\n",
        );
        let cfg = parse_args([
            "isolab",
            "symmetrize",
            "--shape",
            s.to_str().unwrap(),
            "--density",
            d.to_str().unwrap(),
            "--points",
            "3",
        ])
        .unwrap();
        let out = execute(&cfg).unwrap();
        assert!(out.failures.is_empty());
        assert!(out.report.starts_with("# statement=symmetrization-perimeter"));
        assert_eq!(out.report.lines().count(), 5);
    }

    #[test]
    fn hermite_flat_exits_zero() {
        let dir = tempfile::tempdir().unwrap();
        let d = write(dir.path(), "d.toml", "family = \"constant\"\n");
        let cfg =
            parse_args(["isolab", "verify", "--suite", "hermite", "--density", d.to_str().unwrap(), "--trials", "10"])
                .unwrap();
        let out = execute(&cfg).unwrap();
        assert!(out.failures.is_empty());
        assert!(out.report.contains("\"statement\":\"means-equality-iff-flat\""));
        assert!(out.report.contains("\"equality_cases\":10"));
    }
}
