//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Tolerances are written out here rather than imported, so a change to a
//! library constant shows up as a failure instead of silently moving the bar.

use std::f64::consts::{E, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use isolab::bvp::{solve_origin, solve_riccati};
use isolab::dist::{weighted_integral, Segmentation, Weight};
use isolab::isoperimetry::profile_value_for;
use isolab::means::compute_m;
use isolab::suites::{run_suite, Suite, SuiteOptions, SuiteReport};
use isolab::{Density, RhoFunction, DEFAULT_EPS};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> std::result::Result<f64, String> {
    let d = (got - want).abs();
    ensure(d <= tol, || format!("{name}: got {got:.17e}, want {want:.17e}, |diff| {d:.3e} > {tol:e}"))?;
    Ok(d)
}

fn within(name: &str, took: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(took <= limit, || format!("{name} took {:.1}s, limit {}s", took.as_secs_f64(), limit.as_secs()))
}

fn suite(s: Suite) -> std::result::Result<(SuiteReport, Duration), String> {
    let t = Instant::now();
    let rep = run_suite(s, &SuiteOptions::default()).map_err(|e| format!("{s} suite errored: {e}"))?;
    Ok((rep, t.elapsed()))
}

/// Every row of `statement` passed and, when given, carries tolerance `tol`.
/// Returns the number of rows.
fn statement(rep: &SuiteReport, statement: &str, tol: Option<f64>) -> std::result::Result<usize, String> {
    let rows: Vec<_> = rep.rows_for(statement).collect();
    ensure(!rows.is_empty(), || format!("no rows for {statement}"))?;
    if let Some(tol) = tol {
        if let Some(r) = rows.iter().find(|r| r.tol != tol) {
            return Err(format!("{statement} case {} has tol {:e}, expected {tol:e}", r.case, r.tol));
        }
    }
    if let Some(r) = rows.iter().find(|r| !r.passed) {
        return Err(format!(
            "{statement} fails at case {} (lhs {:.17e}, rhs {:.17e}, tol {:e})",
            r.case, r.lhs, r.rhs, r.tol
        ));
    }
    Ok(rows.len())
}

fn flat(a: f64, b: f64) -> RhoFunction {
    RhoFunction::constant(a, b, 0.0).unwrap()
}

fn anchors() -> Check {
    let t = Instant::now();
    let tol = 1e-8;
    let e = |x: isolab::Error| x.to_string();

    let ric = solve_riccati(&flat(1.0, 3.0), 1.0, 3.0, DEFAULT_EPS).map_err(e)?;
    close(
        "flat singular integral",
        weighted_integral(Weight::DecreasingSingular(0.5), &ric, 1e-10).map_err(e)?,
        PI,
        tol,
    )?;

    let origin = solve_origin(&flat(0.0, 2.0), 2.0, DEFAULT_EPS).map_err(e)?;
    close(
        "flat origin integral",
        weighted_integral(Weight::OddIncreasing(0.5), &origin, 1e-10).map_err(e)?,
        PI / 2.0,
        tol,
    )?;

    let m = compute_m(&RhoFunction::constant(1.0, 2.0, 1.0).unwrap(), 1.0, 2.0, DEFAULT_EPS).map_err(e)?;
    close("m for rho = 1 on [1, 2]", m, 2.0 - 1.0 / E, tol)?;

    // flat Riccati solution on [1, 3] is w = 4x/(3 + x²); {w > t} is the
    // interval between the roots of t x² - 4x + 3t
    let wm1 = |x: f64| ric.w(x).unwrap() - 1.0;
    let seg = Segmentation::new(wm1, 1.0, 3.0, &[], 2048).map_err(e)?;
    let top = 2.0 / 3f64.sqrt();
    for i in 0..20 {
        let level = 1.0 + (top - 1.0) * i as f64 / 20.0;
        let s = (4.0 - 3.0 * level * level).sqrt();
        let want = ((2.0 + s) / (2.0 - s)).ln();
        let got = seg.mu_above(wm1, level - 1.0).map_err(e)?;
        close(&format!("flat distribution at t = {level}"), got, want, tol)?;
    }

    let p = profile_value_for(&Density::constant(0.0), PI, DEFAULT_EPS).map_err(e)?;
    close("flat profile at pi", p.perimeter, 2.0 * PI, tol)?;
    let sq = Density::power(1.0, 2.0, 0.0).map_err(e)?;
    let p = profile_value_for(&sq, PI * (E - 1.0), DEFAULT_EPS).map_err(e)?;
    close("profile of h = t^2 at pi(e - 1)", p.perimeter, 2.0 * PI * E, tol)?;

    within("anchors", t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("6 anchors incl. 20 distribution points, {:.2}s", t.elapsed().as_secs_f64()))
}

fn hermite() -> Check {
    let (rep, took) = suite(Suite::Hermite)?;
    ensure(rep.instances == 1000, || format!("{} instances", rep.instances))?;
    for s in ["mean-lower-bound", "hat-mean-lower-bound", "mean-upper-bound", "hat-mean-reverse-bound"] {
        ensure(statement(&rep, s, Some(1e-9))? == 1000, || format!("{s} row count"))?;
    }
    // equality is flagged exactly on the instances whose coefficient vanishes
    statement(&rep, "means-equality-iff-flat", None)?;
    let eq = rep.rows_for("means-equality-iff-flat").filter(|r| r.equality).count();
    within("hermite", took, Duration::from_secs(60))?;
    Ok(format!("1000 instances, {eq} flat with equality, {:.1}s", took.as_secs_f64()))
}

fn linear() -> Check {
    let (rep, took) = suite(Suite::Linear)?;
    ensure(rep.instances == 200, || format!("{} instances", rep.instances))?;
    let n = statement(&rep, "linear-distribution-order", Some(1e-6))?;
    statement(&rep, "odd-weight-integral-sign", Some(1e-5))?;
    statement(&rep, "linear-flat-integral", Some(2e-6))?;
    statement(&rep, "linear-flat-equality", Some(1e-8))?;
    for s in ["origin-lower-envelope", "origin-half-turn-integral", "origin-flat-integral"] {
        statement(&rep, s, None)?;
    }
    Ok(format!("200 instances, {n} threshold comparisons, {:.1}s", took.as_secs_f64()))
}

fn riccati() -> Check {
    let (rep, took) = suite(Suite::Riccati)?;
    ensure(rep.instances == 200, || format!("{} instances", rep.instances))?;
    let n = statement(&rep, "riccati-distribution-order", Some(1e-6))?;
    statement(&rep, "riccati-sup-norm", Some(1e-8))?;
    statement(&rep, "riccati-singular-integral", Some(1e-5))?;
    statement(&rep, "riccati-distribution-slope", Some(1e-4))?;
    statement(&rep, "riccati-flat-equality", Some(1e-8))?;
    statement(&rep, "riccati-flat-integral", Some(1e-8))?;
    let slope = rep.rows_for("riccati-distribution-slope").count();
    let skipped = rep.rows_for("riccati-distribution-slope").filter(|r| r.skipped).count();
    Ok(format!(
        "200 instances, {n} threshold comparisons, slope checked at {} cells, {:.1}s",
        slope - skipped,
        took.as_secs_f64()
    ))
}

fn bvp() -> Check {
    let (rep, took) = suite(Suite::Bvp)?;
    ensure(rep.instances == 100, || format!("{} instances", rep.instances))?;
    ensure(statement(&rep, "linear-residual", Some(1e-7))? == 400, || "expected 100 linear rows per sign pair".into())?;
    statement(&rep, "linear-shooting-lambda", Some(1e-7))?;
    for s in ["riccati-residual", "origin-residual"] {
        statement(&rep, s, Some(1e-7))?;
    }
    for s in ["riccati-shooting-lambda", "origin-shooting-lambda"] {
        statement(&rep, s, Some(1e-7))?;
    }
    for s in ["same-sign-positive", "opposite-sign-slope", "riccati-reciprocal"] {
        statement(&rep, s, None)?;
    }
    let worst = rep.rows_for("linear-residual").map(|r| r.lhs).fold(0.0, f64::max);
    Ok(format!("4 x 100 linear plus Riccati and origin, max residual {worst:.1e}, {:.1}s", took.as_secs_f64()))
}

fn symmetrization() -> Check {
    let (rep, took) = suite(Suite::Symmetrization)?;
    ensure(rep.instances == 100, || format!("{} instances", rep.instances))?;
    statement(&rep, "symmetrization-volume", None)?;
    statement(&rep, "symmetrization-perimeter", None)?;
    // perimeter rows compare against P before, allowing 1e-9 (1 + P)
    for r in rep.rows_for("symmetrization-perimeter") {
        ensure(r.tol <= 1e-9 * (1.0 + r.rhs) * (1.0 + 1e-12), || {
            format!("perimeter case {} allows {:e}", r.case, r.tol)
        })?;
    }
    statement(&rep, "symmetrization-fixed-volume", Some(1e-9))?;
    statement(&rep, "symmetrization-fixed-perimeter", Some(1e-9))?;
    Ok(format!("100 shapes, volume kept and perimeter not increased, {:.1}s", took.as_secs_f64()))
}

fn isoperimetric() -> Check {
    let (rep, took) = suite(Suite::Isoperimetric)?;
    ensure(rep.instances == 50, || format!("{} instances", rep.instances))?;
    ensure(statement(&rep, "annuli-gap", Some(1e-7))? == 150, || "expected 50 instances x N = 1, 2, 3".into())?;
    for n in 1..=3 {
        let c = rep.rows_for("annuli-gap").filter(|r| r.case.ends_with(&format!("-n{n}"))).count();
        ensure(c == 50, || format!("{c} runs with N = {n}"))?;
    }
    statement(&rep, "annuli-superadditivity", Some(1e-9))?;
    statement(&rep, "annuli-volume-constraint", None)?;
    statement(&rep, "superadditivity-random-sequence", None)?;
    statement(&rep, "uniqueness-tie-inside", Some(1e-9))?;
    statement(&rep, "uniqueness-strict-loss", None)?;
    for r in rep.rows_for("uniqueness-strict-loss") {
        ensure(r.lhs == 1e-4 && r.rhs > 1e-4, || format!("loss {:e} at {}", r.rhs, r.case))?;
    }
    within("isoperimetric", took, Duration::from_secs(600))?;
    let worst = rep.rows_for("annuli-gap").map(|r| r.rhs - r.lhs).fold(f64::INFINITY, f64::min);
    Ok(format!("50 instances x 3, smallest gap {worst:.1e}, {:.1}s", took.as_secs_f64()))
}

fn report_bytes(s: Suite, seed: u64, n: usize) -> std::result::Result<String, String> {
    let opts = SuiteOptions { instances: Some(n), ..SuiteOptions::with_seed(seed) };
    let rep = run_suite(s, &opts).map_err(|e| e.to_string())?;
    Ok(format!("{}{}", rep.rows_csv().map_err(|e| e.to_string())?, rep.summaries_json()))
}

fn cli_bytes(args: &[&str], threads: &str) -> std::result::Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_isolab"))
        .args(args)
        .env("ISOLAB_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("isolab {args:?} exited with {}", out.status))?;
    Ok(out.stdout)
}

fn determinism() -> Check {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let counts = [
        (Suite::Hermite, 50),
        (Suite::Linear, 8),
        (Suite::Riccati, 8),
        (Suite::Bvp, 8),
        (Suite::Symmetrization, 8),
        (Suite::Isoperimetric, 2),
    ];
    for (s, n) in counts {
        let first = report_bytes(s, 7, n)?;
        let second = single.install(|| report_bytes(s, 7, n))?;
        ensure(first == second, || format!("{s} report differs between runs"))?;
        ensure(first != report_bytes(s, 8, n)?, || format!("{s} report ignores the seed"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path().join("density.toml");
    std::fs::write(&d, "family = \"power\"\nparams = [0.5, 1.5]\nh0 = 0.1\n").map_err(|e| e.to_string())?;
    let d = d.to_str().unwrap();
    let runs: [&[&str]; 2] = [
        &["verify", "--suite", "riccati", "--trials", "4", "--seed", "3"],
        &["compete", "--density", d, "--v", "7.5", "--n", "2", "--trials", "8", "--seed", "3"],
    ];
    for args in runs {
        ensure(cli_bytes(args, "1")? == cli_bytes(args, "2")?, || format!("isolab {args:?} differs between runs"))?;
    }
    Ok("6 suites in-process on 1 thread and the default pool, 2 CLI runs; byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("closed-form anchors", anchors),
        ("mean bounds", hermite),
        ("linear distribution comparison", linear),
        ("Riccati distribution comparison", riccati),
        ("boundary-value solvers", bvp),
        ("cap symmetrization", symmetrization),
        ("ball against annuli", isoperimetric),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
