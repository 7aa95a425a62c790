//! Seeded verification suites.
//!
//! Each suite draws its instances from independent `(seed, index)` streams,
//! evaluates them in parallel and collects rows in index order, so a report
//! depends only on its options. Every row is an inequality `lhs <= rhs + tol`
//! tagged with a statement id; summaries aggregate rows per statement.
//!
//! When a density is supplied its coefficient replaces the random step
//! coefficient; when an interval is supplied it replaces the random interval.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bvp::shooting::{shoot_linear, shoot_origin, shoot_riccati};
use crate::bvp::{residual_check, solve_linear, solve_origin, solve_riccati, Eta};
use crate::density::{Density, RhoFunction, Side};
use crate::dist::{check_below_one, compare_linear, compare_riccati, weighted_integral, ComparisonReport, Weight};
use crate::error::{Error, Result};
use crate::geometry::{kernel_for, symmetrize, CapProfile, Component, ShapeUnion};
use crate::isoperimetry::{
    compete, superadditivity_check, uniqueness_probe, CompeteOptions, ProbeKind, SUPERADDITIVE_TOL,
};
use crate::kernel::{RadialKernel, DEFAULT_EPS};
use crate::means::{compute_mhat, verify_means, DEFAULT_EQ_TOL};
use crate::random::{self, DEFAULT_SEED};
use crate::report::{self, Record};

pub const MEANS_TOL: f64 = 1e-9;
pub const DISTRIBUTION_TOL: f64 = 1e-6;
pub const ODD_INTEGRAL_TOL: f64 = 1e-5;
pub const FLAT_INTEGRAL_TOL: f64 = 2e-6;
pub const FLAT_EQUALITY_TOL: f64 = 1e-8;
pub const SUP_TOL: f64 = 1e-8;
pub const SINGULAR_INTEGRAL_TOL: f64 = 1e-5;
pub const SLOPE_TOL: f64 = 1e-4;
pub const RESIDUAL_TOL: f64 = 1e-7;
pub const SHOOTING_TOL: f64 = 1e-7;
pub const FIXED_POINT_TOL: f64 = 1e-9;
/// Relative discretization allowance of the exact cap symmetrization.
pub const DISC_REL: f64 = 1e-9;
pub const GAP_TOL: f64 = 1e-7;
pub const VOLUME_TOL: f64 = 1e-9;
pub const TIE_TOL: f64 = 1e-9;
pub const LOSS_TOL: f64 = 1e-4;

/// Halvings allowed per instance when a hypothesis gate rejects a sample.
const MAX_ATTEMPTS: usize = 200;
/// Streams of secondary instance families start here.
const SECONDARY_STREAM: u64 = 1 << 32;
const SAMPLE_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Hermite,
    Linear,
    Riccati,
    Bvp,
    Symmetrization,
    Isoperimetric,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Hermite, Suite::Linear, Suite::Riccati, Suite::Bvp, Suite::Symmetrization, Suite::Isoperimetric];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::Linear => "linear",
            Suite::Riccati => "riccati",
            Suite::Bvp => "bvp",
            Suite::Symmetrization => "symmetrization",
            Suite::Isoperimetric => "isoperimetric",
        }
    }

    /// Instances drawn when nothing is fixed.
    pub fn default_instances(&self) -> usize {
        match self {
            Suite::Hermite => 1000,
            Suite::Linear | Suite::Riccati => 200,
            Suite::Bvp | Suite::Symmetrization => 100,
            Suite::Isoperimetric => 50,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| Error::Input(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Defaults to the suite's count, or 1 when density and interval are fixed.
    pub instances: Option<usize>,
    pub density: Option<Density>,
    pub interval: Option<(f64, f64)>,
    /// Replaces the tolerance of the suite's headline statement.
    pub tol: Option<f64>,
    pub eps: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, instances: None, density: None, interval: None, tol: None, eps: DEFAULT_EPS }
    }
}

impl SuiteOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn count(&self, suite: Suite) -> usize {
        let fixed = match suite {
            Suite::Isoperimetric | Suite::Symmetrization => false,
            _ => self.density.is_some() && self.interval.is_some(),
        };
        self.instances.unwrap_or(if fixed { 1 } else { suite.default_instances() })
    }

    fn interval(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        // always draw, so fixing the interval leaves the other draws unchanged
        let drawn = random::interval(rng);
        self.interval.unwrap_or(drawn)
    }

    fn rho(&self, rng: &mut ChaCha8Rng, a: f64, b: f64) -> Result<RhoFunction> {
        let drawn = random::step_rho(rng, a, b)?;
        match &self.density {
            Some(d) => RhoFunction::from_density(d, a, b),
            None => Ok(drawn),
        }
    }

    fn density(&self, rng: &mut ChaCha8Rng) -> Result<Density> {
        let drawn = random::density(rng)?;
        Ok(self.density.clone().unwrap_or(drawn))
    }
}

/// One checked inequality `lhs <= rhs + tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub statement: &'static str,
    pub case: String,
    pub tol: f64,
    pub a: f64,
    pub b: f64,
    /// Threshold or other abscissa, NaN for scalar checks.
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub equality: bool,
    pub skipped: bool,
    pub passed: bool,
}

impl Row {
    fn check(statement: &'static str, case: &str, tol: f64, lhs: f64, rhs: f64) -> Self {
        let d = lhs - rhs;
        Self {
            statement,
            case: case.to_string(),
            tol,
            a: f64::NAN,
            b: f64::NAN,
            x: f64::NAN,
            lhs,
            rhs,
            equality: d.abs() <= tol,
            skipped: false,
            passed: d <= tol,
        }
    }

    fn on(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    fn at(mut self, x: f64) -> Self {
        self.x = x;
        self
    }

    pub fn violation(&self) -> f64 {
        self.lhs - self.rhs
    }

    pub fn record(&self) -> Record {
        Record::new()
            .with("statement", self.statement)
            .with("case", self.case.as_str())
            .with("tol", self.tol)
            .with("a", self.a)
            .with("b", self.b)
            .with("x", self.x)
            .with("lhs", self.lhs)
            .with("rhs", self.rhs)
            .with("violation", self.violation())
            .with("equality", self.equality)
            .with("skipped", self.skipped)
            .with("passed", self.passed)
    }
}

fn comparison_rows(r: &ComparisonReport, case: &str, a: f64, b: f64) -> Vec<Row> {
    (0..r.thresholds.len())
        .map(|i| {
            let mut row = Row::check(r.statement, case, r.tol, r.lhs[i], r.rhs[i]).on(a, b).at(r.thresholds[i]);
            if r.skipped[i] {
                row.skipped = true;
                row.passed = true;
                row.equality = false;
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    /// Coefficient halvings forced by hypothesis gates.
    pub halvings: usize,
    pub rows: Vec<Row>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// Statement ids with at least one failing row, in order of appearance.
    pub fn failing_statements(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for r in self.rows.iter().filter(|r| !r.passed) {
            if !out.contains(&r.statement) {
                out.push(r.statement);
            }
        }
        out
    }

    pub fn rows_for(&self, statement: &str) -> impl Iterator<Item = &Row> + '_ {
        let statement = statement.to_string();
        self.rows.iter().filter(move |r| r.statement == statement)
    }

    pub fn statements(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.statement) {
                out.push(r.statement);
            }
        }
        out
    }

    /// Per-statement summaries followed by one suite record.
    pub fn summaries(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for st in self.statements() {
            let rows: Vec<&Row> = self.rows_for(st).collect();
            let checked: Vec<&&Row> = rows.iter().filter(|r| !r.skipped).collect();
            let max_violation = checked.iter().map(|r| r.violation()).fold(f64::NEG_INFINITY, f64::max);
            let tol = rows.iter().map(|r| r.tol).fold(f64::NEG_INFINITY, f64::max);
            let failures = rows.iter().filter(|r| !r.passed).count();
            let (strict_cases, window) = strict_windows(&rows);
            let (case, lo, hi) = window.unwrap_or((String::new(), f64::NAN, f64::NAN));
            out.push(
                Record::new()
                    .with("suite", self.suite.as_str())
                    .with("statement", st)
                    .with("tol", tol)
                    .with("passed", failures == 0)
                    .with("checks", checked.len())
                    .with("skipped", rows.len() - checked.len())
                    .with("failures", failures)
                    .with("max_violation", max_violation)
                    .with("equality_cases", count_equality_cases(&rows))
                    .with("strict_cases", strict_cases)
                    .with("strict_case", case)
                    .with("strict_lo", lo)
                    .with("strict_hi", hi),
            );
        }
        out.push(
            Record::new()
                .with("suite", self.suite.as_str())
                .with("seed", self.seed)
                .with("instances", self.instances)
                .with("halvings", self.halvings)
                .with("rows", self.rows.len())
                .with("passed", self.passed()),
        );
        out
    }

    pub fn rows_csv(&self) -> Result<String> {
        report::to_csv(&self.rows.iter().map(Row::record).collect::<Vec<_>>())
    }

    pub fn rows_json(&self) -> String {
        report::to_json_lines(&self.rows.iter().map(Row::record).collect::<Vec<_>>())
    }

    pub fn summaries_json(&self) -> String {
        report::to_json_lines(&self.summaries())
    }
}

/// Cases whose checked rows all hold with equality.
fn count_equality_cases(rows: &[&Row]) -> usize {
    let mut cases: Vec<(&str, bool)> = Vec::new();
    for r in rows.iter().filter(|r| !r.skipped) {
        match cases.iter_mut().find(|c| c.0 == r.case) {
            Some(c) => c.1 &= r.equality,
            None => cases.push((&r.case, r.equality)),
        }
    }
    cases.iter().filter(|c| c.1).count()
}

/// Number of cases with a strict row, and the widest run of consecutive
/// strict rows (`rhs - lhs > tol`) over a threshold axis.
fn strict_windows(rows: &[&Row]) -> (usize, Option<(String, f64, f64)>) {
    let mut strict_cases: Vec<&str> = Vec::new();
    let mut best: Option<(String, f64, f64)> = None;
    let mut run: Option<(&str, f64, f64)> = None;
    for r in rows {
        let strict = !r.skipped && r.rhs - r.lhs > r.tol;
        if strict && !strict_cases.contains(&r.case.as_str()) {
            strict_cases.push(&r.case);
        }
        if !strict || !r.x.is_finite() || run.is_some_and(|(c, _, _)| c != r.case) {
            run = None;
        }
        if strict && r.x.is_finite() {
            let cur = match run {
                Some((c, lo, _)) => (c, lo, r.x),
                None => (r.case.as_str(), r.x, r.x),
            };
            run = Some(cur);
            if best.as_ref().is_none_or(|b| cur.2 - cur.1 > b.2 - b.1) {
                best = Some((cur.0.to_string(), cur.1, cur.2));
            }
        }
    }
    (strict_cases.len(), best)
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let n = opts.count(suite);
    let (rows, halvings) = match suite {
        Suite::Hermite => (hermite(opts, n)?, 0),
        Suite::Linear => linear(opts, n)?,
        Suite::Riccati => riccati(opts, n)?,
        Suite::Bvp => (bvp(opts, n)?, 0),
        Suite::Symmetrization => (symmetrization(opts, n)?, 0),
        Suite::Isoperimetric => (isoperimetric(opts, n)?, 0),
    };
    Ok(SuiteReport { suite, seed: opts.seed, instances: n, halvings, rows })
}

fn flatten(parts: Vec<Vec<Row>>) -> Vec<Row> {
    parts.into_iter().flatten().collect()
}

fn hermite(opts: &SuiteOptions, n: usize) -> Result<Vec<Row>> {
    let tol = opts.tol.unwrap_or(MEANS_TOL);
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, i as u64);
            let (a, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, a, b)?;
            let rep = verify_means(&rho, a, b, DEFAULT_EQ_TOL, opts.eps)?;
            let case = format!("random-{i}");
            // the row holds with equality exactly when a bound is attained;
            // it passes when that happens only for the zero coefficient
            let margin = rep.upper_margin.min(rep.reverse_margin);
            let mut eq = Row::check("means-equality-iff-flat", &case, DEFAULT_EQ_TOL, -margin, 0.0).on(a, b);
            eq.equality = rep.upper_equality || rep.reverse_equality;
            eq.passed = rep.equality_consistent();
            Ok(vec![
                Row::check("mean-lower-bound", &case, tol, rep.m0, rep.m).on(a, b),
                Row::check("hat-mean-lower-bound", &case, tol, rep.mhat0, rep.mhat).on(a, b),
                Row::check("mean-upper-bound", &case, tol, rep.m, rep.upper_bound).on(a, b),
                Row::check("hat-mean-reverse-bound", &case, tol, (b - a) * rep.mhat, rep.reverse_bound).on(a, b),
                eq,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(flatten(parts))
}

/// Runs `check` on `rho`, halving the coefficient while a hypothesis gate
/// rejects it; returns the result and the number of rejections. Halving keeps
/// the jump positions, so accepted instances stay non-flat.
fn with_shrinking<T>(
    fixed: bool,
    rho: RhoFunction,
    mut check: impl FnMut(&RhoFunction) -> Result<T>,
) -> Result<(T, usize)> {
    let mut rho = rho;
    let mut halvings = 0;
    loop {
        match check(&rho) {
            Ok(v) => return Ok((v, halvings)),
            Err(Error::Hypothesis(_)) if !fixed && halvings + 1 < MAX_ATTEMPTS => {
                halvings += 1;
                rho = rho.scaled(0.5)?;
            }
            Err(e) => return Err(e),
        }
    }
}

fn flat_rho(a: f64, b: f64) -> Result<RhoFunction> {
    RhoFunction::constant(a, b, 0.0)
}

fn linear(opts: &SuiteOptions, n: usize) -> Result<(Vec<Row>, usize)> {
    let tol = opts.tol.unwrap_or(DISTRIBUTION_TOL);
    let fixed = opts.density.is_some() && opts.interval.is_some();
    let eps = opts.eps;
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, i as u64);
            let (a, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, a, b)?;
            let (cmp, halvings) = with_shrinking(fixed, rho, |r| compare_linear(r, a, b, tol, eps))?;
            let case = format!("random-{i}");
            let mut rows = comparison_rows(&cmp.report, &case, a, b);
            let integral = weighted_integral(Weight::OddIncreasing(0.5), &cmp.solution, 1e-10)?;
            rows.push(Row::check("odd-weight-integral-sign", &case, ODD_INTEGRAL_TOL, integral, 0.0).on(a, b));
            Ok((rows, halvings))
        })
        .collect::<Result<Vec<_>>>()?;
    let halvings: usize = parts.iter().map(|p| p.1).sum();
    let mut rows = flatten(parts.into_iter().map(|p| p.0).collect());

    // flat control: both distributions coincide and the integral vanishes
    let (a, b) = opts.interval.unwrap_or((1.0, 3.0));
    let ctl = compare_linear(&flat_rho(a, b)?, a, b, FLAT_EQUALITY_TOL, eps)?;
    let spread = ctl.report.lhs.iter().zip(&ctl.report.rhs).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max);
    rows.push(Row::check("linear-flat-equality", "flat", FLAT_EQUALITY_TOL, spread, 0.0).on(a, b));
    let integral = weighted_integral(Weight::OddIncreasing(0.5), &ctl.solution, 1e-10)?;
    rows.push(Row::check("linear-flat-integral", "flat", FLAT_INTEGRAL_TOL, integral.abs(), 0.0).on(a, b));

    let (origin, origin_rejected) = origin_rows(opts, n.div_ceil(4).max(1))?;
    rows.extend(origin);
    Ok((rows, halvings + origin_rejected))
}

/// The problem anchored at the origin: `u >= t/b` and the half-turn integral.
fn origin_rows(opts: &SuiteOptions, n: usize) -> Result<(Vec<Row>, usize)> {
    let eps = opts.eps;
    let fixed = opts.density.is_some() && opts.interval.is_some();
    let check = |rho: &RhoFunction, b: f64, case: &str| -> Result<Vec<Row>> {
        let sol = solve_origin(rho, b, eps)?;
        check_below_one(&sol)?;
        let mut worst = f64::NEG_INFINITY;
        let mut pts: Vec<f64> = (1..=SAMPLE_POINTS).map(|j| b * j as f64 / SAMPLE_POINTS as f64).collect();
        pts.extend(sol.breakpoints());
        for t in pts {
            worst = worst.max(t / b - sol.u(t)?);
        }
        let integral = weighted_integral(Weight::OddIncreasing(0.5), &sol, 1e-10)?;
        Ok(vec![
            Row::check("origin-lower-envelope", case, FIXED_POINT_TOL, worst, 0.0).on(0.0, b),
            Row::check("origin-half-turn-integral", case, ODD_INTEGRAL_TOL, PI / 2.0, integral).on(0.0, b),
        ])
    };
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, SECONDARY_STREAM + i as u64);
            let (_, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, 0.0, b)?;
            with_shrinking(fixed, rho, |r| check(r, b, &format!("origin-{i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let halvings: usize = parts.iter().map(|p| p.1).sum();
    let mut rows = flatten(parts.into_iter().map(|p| p.0).collect());
    let sol = solve_origin(&flat_rho(0.0, 2.0)?, 2.0, eps)?;
    let integral = weighted_integral(Weight::OddIncreasing(0.5), &sol, 1e-10)?;
    rows.push(
        Row::check("origin-flat-integral", "flat", FLAT_EQUALITY_TOL, (integral - PI / 2.0).abs(), 0.0).on(0.0, 2.0),
    );
    Ok((rows, halvings))
}

fn riccati(opts: &SuiteOptions, n: usize) -> Result<(Vec<Row>, usize)> {
    let tol = opts.tol.unwrap_or(DISTRIBUTION_TOL);
    let fixed = opts.density.is_some() && opts.interval.is_some();
    let eps = opts.eps;
    let instance = |rho: &RhoFunction, a: f64, b: f64, case: &str, tol: f64| -> Result<Vec<Row>> {
        let cmp = compare_riccati(rho, a, b, tol, SLOPE_TOL, eps)?;
        let mut rows = comparison_rows(&cmp.level, case, a, b);
        rows.extend(comparison_rows(&cmp.slope, case, a, b));
        rows.push(Row::check("riccati-sup-norm", case, SUP_TOL, cmp.sup_w, cmp.sup_w0).on(a, b));
        let integral = weighted_integral(Weight::DecreasingSingular(0.5), &cmp.solution, 1e-10)?;
        rows.push(Row::check("riccati-singular-integral", case, SINGULAR_INTEGRAL_TOL, PI, integral).on(a, b));
        Ok(rows)
    };
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, i as u64);
            let case = format!("random-{i}");
            let (a, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, a, b)?;
            with_shrinking(fixed, rho, |r| instance(r, a, b, &case, tol))
        })
        .collect::<Result<Vec<_>>>()?;
    let halvings: usize = parts.iter().map(|p| p.1).sum();
    let mut rows = flatten(parts.into_iter().map(|p| p.0).collect());

    let (a, b) = opts.interval.unwrap_or((1.0, 3.0));
    let ctl = compare_riccati(&flat_rho(a, b)?, a, b, FLAT_EQUALITY_TOL, SLOPE_TOL, eps)?;
    let spread = ctl.level.lhs.iter().zip(&ctl.level.rhs).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max);
    rows.push(Row::check("riccati-flat-equality", "flat", FLAT_EQUALITY_TOL, spread, 0.0).on(a, b));
    let integral = weighted_integral(Weight::DecreasingSingular(0.5), &ctl.solution, 1e-10)?;
    rows.push(Row::check("riccati-flat-integral", "flat", FLAT_EQUALITY_TOL, (integral - PI).abs(), 0.0).on(a, b));
    Ok((rows, halvings))
}

fn sample_points(a: f64, b: f64, bps: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=SAMPLE_POINTS).map(|j| a + (b - a) * j as f64 / SAMPLE_POINTS as f64).collect();
    pts.extend(bps.iter().copied().filter(|&x| x > a && x < b));
    pts
}

fn bvp(opts: &SuiteOptions, n: usize) -> Result<Vec<Row>> {
    let tol = opts.tol.unwrap_or(RESIDUAL_TOL);
    let eps = opts.eps;
    let mut rows = Vec::new();
    for (e, eta) in Eta::ALL.into_iter().enumerate() {
        let parts = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = random::stream(opts.seed, e as u64 * SECONDARY_STREAM + i as u64);
                let (a, b) = opts.interval(&mut rng);
                let rho = opts.rho(&mut rng, a, b)?;
                let sol = solve_linear(&rho, a, b, eta, eps)?;
                let case = format!("eta({eta})-{i}");
                let mut out = vec![
                    Row::check("linear-residual", &case, tol, residual_check(&sol, 200)?, 0.0).on(a, b),
                    Row::check(
                        "linear-shooting-lambda",
                        &case,
                        SHOOTING_TOL,
                        (sol.lambda - shoot_linear(&rho, a, b, eta)?).abs(),
                        0.0,
                    )
                    .on(a, b),
                ];
                let pts = sample_points(a, b, &sol.breakpoints());
                if eta == Eta::PP {
                    let min_u = pts
                        .iter()
                        .map(|&t| sol.u(t))
                        .collect::<Result<Vec<f64>>>()?
                        .into_iter()
                        .fold(f64::INFINITY, f64::min);
                    let mut row = Row::check("same-sign-positive", &case, 0.0, 0.0, min_u).on(a, b);
                    row.passed = min_u > 0.0;
                    out.push(row);
                }
                if eta == Eta::PM {
                    let mhat = compute_mhat(&rho, a, b, eps)?;
                    let mut worst = f64::NEG_INFINITY;
                    for &t in &pts {
                        if sol.u(t)? >= 0.0 {
                            for side in [Side::Left, Side::Right] {
                                if (t > a || side == Side::Right) && (t < b || side == Side::Left) {
                                    worst = worst.max(sol.du(t, side)? + mhat);
                                }
                            }
                        }
                    }
                    out.push(
                        Row::check("opposite-sign-slope", &case, DEFAULT_EQ_TOL * (1.0 + mhat.abs()), worst, 0.0)
                            .on(a, b),
                    );
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(flatten(parts));
    }

    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, 4 * SECONDARY_STREAM + i as u64);
            let (a, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, a, b)?;
            let sol = solve_riccati(&rho, a, b, eps)?;
            let case = format!("riccati-{i}");
            let mut worst: f64 = 0.0;
            for t in sample_points(a, b, &sol.breakpoints()) {
                worst = worst.max((sol.w(t)? * sol.reciprocal().u(t)? - 1.0).abs());
            }
            Ok(vec![
                Row::check("riccati-residual", &case, tol, residual_check(&sol, 200)?, 0.0).on(a, b),
                Row::check(
                    "riccati-shooting-lambda",
                    &case,
                    SHOOTING_TOL,
                    (sol.lambda - shoot_riccati(&rho, a, b)?).abs(),
                    0.0,
                )
                .on(a, b),
                Row::check("riccati-reciprocal", &case, FIXED_POINT_TOL, worst, 0.0).on(a, b),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(flatten(parts));

    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, 5 * SECONDARY_STREAM + i as u64);
            let (_, b) = opts.interval(&mut rng);
            let rho = opts.rho(&mut rng, 0.0, b)?;
            let sol = solve_origin(&rho, b, eps)?;
            let case = format!("origin-{i}");
            Ok(vec![
                Row::check("origin-residual", &case, tol, residual_check(&sol, 200)?, 0.0).on(0.0, b),
                Row::check(
                    "origin-shooting-lambda",
                    &case,
                    SHOOTING_TOL,
                    (sol.lambda - shoot_origin(&rho, b)?).abs(),
                    0.0,
                )
                .on(0.0, b),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(flatten(parts));
    Ok(rows)
}

fn fixed_point_shapes() -> Result<Vec<(&'static str, ShapeUnion)>> {
    Ok(vec![
        (
            "half-disk",
            ShapeUnion::single(Component::Cap(CapProfile::new(PI / 2.0, &[(0.0, PI / 2.0), (1.5, PI / 2.0)])?))?,
        ),
        ("centered-ball", ShapeUnion::single(Component::CenteredBall { r: 1.5 })?),
    ])
}

fn symmetrization(opts: &SuiteOptions, n: usize) -> Result<Vec<Row>> {
    let eps = opts.eps;
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, i as u64);
            let d = opts.density(&mut rng)?;
            let shape = random::multi_bump(&mut rng)?;
            let k = kernel_for(&shape, &d, eps)?;
            let out = symmetrize(&shape, &k)?;
            let rel = opts.tol.unwrap_or(DISC_REL);
            let case = format!("random-{i}");
            Ok(vec![
                Row::check(
                    "symmetrization-volume",
                    &case,
                    rel * (1.0 + out.volume_before) + out.volume_disc,
                    (out.volume_after - out.volume_before).abs(),
                    0.0,
                ),
                Row::check(
                    "symmetrization-perimeter",
                    &case,
                    rel * (1.0 + out.perimeter_before) + out.perimeter_disc,
                    out.perimeter_after,
                    out.perimeter_before,
                ),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = flatten(parts);

    let mut densities = vec![Density::constant(0.0), Density::linear(0.7, 0.0)?, Density::power(1.0, 2.0, 0.0)?];
    if let Some(d) = &opts.density {
        densities = vec![d.clone()];
    }
    for (j, d) in densities.iter().enumerate() {
        for (name, shape) in fixed_point_shapes()? {
            let k = kernel_for(&shape, d, eps)?;
            let out = symmetrize(&shape, &k)?;
            let case = format!("{name}-{j}");
            rows.push(Row::check(
                "symmetrization-fixed-volume",
                &case,
                FIXED_POINT_TOL,
                (out.volume_after - out.volume_before).abs(),
                0.0,
            ));
            rows.push(Row::check(
                "symmetrization-fixed-perimeter",
                &case,
                FIXED_POINT_TOL,
                (out.perimeter_after - out.perimeter_before).abs(),
                0.0,
            ));
        }
    }
    Ok(rows)
}

fn plateau_density(opts: &SuiteOptions) -> Result<Density> {
    match &opts.density {
        Some(d) if d.plateau_radius().is_some_and(|r| r > 0.0 && r.is_finite()) => Ok(d.clone()),
        _ => Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0),
    }
}

fn isoperimetric(opts: &SuiteOptions, n: usize) -> Result<Vec<Row>> {
    let tol = opts.tol.unwrap_or(GAP_TOL);
    let eps = opts.eps;
    let parts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::stream(opts.seed, i as u64);
            let d = opts.density(&mut rng)?;
            let v = rng.random_range(0.2f64.ln()..60f64.ln()).exp();
            let mut rows = Vec::new();
            for annuli in 1..=3 {
                let seed = rng.random::<u64>();
                let r = compete(&d, v, CompeteOptions { n: annuli, trials: 32, seed, eps, trace: false })?;
                let case = format!("random-{i}-n{annuli}");
                rows.push(Row::check("annuli-gap", &case, tol, r.ball_perimeter, r.best_perimeter).at(v));
                rows.push(
                    Row::check(
                        "annuli-superadditivity",
                        &case,
                        SUPERADDITIVE_TOL,
                        r.max_superadditivity_violation,
                        0.0,
                    )
                    .at(v),
                );
                rows.push(Row::check("annuli-volume-constraint", &case, VOLUME_TOL, r.max_volume_error, 0.0).at(v));
            }
            // a random decreasing six-term sequence
            let s = v / (2.0 * PI);
            let k = RadialKernel::covering(&d, s, eps)?;
            let mut t: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..s)).collect();
            t.sort_by(|x, y| y.total_cmp(x));
            t.dedup();
            let sa = superadditivity_check(&k, &t)?;
            rows.push(Row::check(
                "superadditivity-random-sequence",
                &format!("random-{i}"),
                SUPERADDITIVE_TOL * (1.0 + sa.lhs),
                sa.rhs,
                sa.lhs,
            ));
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = flatten(parts);

    let d = plateau_density(opts)?;
    let big_r = d.plateau_radius().unwrap_or(1.0);
    let v0 = PI * big_r * big_r * d.h(0.0).exp();
    for q in [0.3, 0.6, 0.9, 1.0, 1.5, 4.0] {
        let rep = uniqueness_probe(&d, q * v0, eps)?;
        let case = format!("plateau-{q}");
        for e in &rep.entries {
            let mut row = match e.kind {
                ProbeKind::Inside => Row::check("uniqueness-tie-inside", &case, TIE_TOL, e.gap.abs(), 0.0),
                _ => {
                    let mut r = Row::check("uniqueness-strict-loss", &case, 0.0, LOSS_TOL, e.gap);
                    r.passed = e.gap > LOSS_TOL;
                    r
                }
            };
            row.x = e.position;
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, n: usize) -> SuiteOptions {
        SuiteOptions { instances: Some(n), ..SuiteOptions::with_seed(seed) }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("geometry".parse::<Suite>().is_err());
    }

    #[test]
    fn hermite_flat_flags_equality() {
        let opts = SuiteOptions { density: Some(Density::constant(0.0)), ..small(1, 20) };
        let rep = run_suite(Suite::Hermite, &opts).unwrap();
        assert!(rep.passed(), "{:?}", rep.failing_statements());
        assert!(rep.rows_for("means-equality-iff-flat").all(|r| r.equality));
    }

    #[test]
    fn small_suites_pass_and_repeat() {
        for suite in [Suite::Hermite, Suite::Linear, Suite::Riccati, Suite::Bvp, Suite::Symmetrization] {
            let a = run_suite(suite, &small(5, 3)).unwrap();
            assert!(a.passed(), "{suite}: {:?}", a.failing_statements());
            let b = run_suite(suite, &small(5, 3)).unwrap();
            assert_eq!(a.rows_csv().unwrap(), b.rows_csv().unwrap());
            assert_eq!(a.summaries_json(), b.summaries_json());
        }
    }

    #[test]
    fn fixed_step_riccati_reports_window() {
        let d = Density::piecewise_linear(&[(0.0, 0.0), (2.0, 0.1)], 0.0).unwrap();
        let opts = SuiteOptions { density: Some(d), interval: Some((1.0, 3.0)), ..SuiteOptions::default() };
        let rep = run_suite(Suite::Riccati, &opts).unwrap();
        assert_eq!(rep.instances, 1);
        assert!(rep.passed(), "{:?}", rep.failing_statements());
        let s = rep.summaries();
        let level = s.iter().find(|r| r.get("statement") == Some(&"riccati-distribution-order".into())).unwrap();
        assert!(matches!(level.get("strict_lo"), Some(report::Field::Num(x)) if x.is_finite()));
    }
}
