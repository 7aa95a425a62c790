use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{alternating_sum, profile_value, SUPERADDITIVE_TOL};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::kernel::RadialKernel;

/// Largest log-scale step for gaps and the inner hole, relative to `v/2π`.
const MAX_LOG_GAP: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompeteOptions {
    /// Number of annuli.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub trial: usize,
    pub iteration: usize,
    pub perimeter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionResult {
    pub v: f64,
    pub r: f64,
    pub ball_perimeter: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub best_trial: usize,
    /// Decreasing radii of the best competitor.
    pub best_radii: Vec<f64>,
    pub best_perimeter: f64,
    /// `P_f(best) - I_f(v)`.
    pub gap: f64,
    pub evaluations: usize,
    /// Smallest `Σ J(t_h) - J(Σ (-1)^h t_h)` over all evaluated configurations.
    pub min_superadditivity_slack: f64,
    /// Largest `(J(Σ (-1)^h t_h) - Σ J(t_h)) / (1 + Σ J(t_h))` over all
    /// evaluated configurations.
    pub max_superadditivity_violation: f64,
    /// Superadditivity held (within tolerance) at every evaluation.
    pub superadditivity_holds: bool,
    /// Largest `|V_f - v| / v` over all evaluated configurations.
    pub max_volume_error: f64,
    pub trace: Vec<TraceRow>,
}

struct Evaluation {
    perimeter: f64,
    radii: Vec<f64>,
    slack: f64,
    violation: f64,
    holds: bool,
    volume_error: f64,
}

/// Maps free parameters to masses `t_h = G(a_h)` with the volume fixed:
/// `n - 1` share logits, `n - 1` log gaps between annuli, one log hole.
fn masses(y: &[f64], n: usize, s: f64) -> Vec<f64> {
    let logits: Vec<f64> = std::iter::once(0.0).chain(y[..n - 1].iter().map(|l| l.clamp(-50.0, 50.0))).collect();
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    let gap = |x: f64| s * x.min(MAX_LOG_GAP).exp();
    let mut t = vec![0.0; 2 * n];
    // build from the inside out
    let mut level = gap(y[2 * n - 2]);
    for h in (0..n).rev() {
        t[2 * h + 1] = level;
        level += s * w[h] / z;
        t[2 * h] = level;
        if h > 0 {
            level += gap(y[n - 1 + h - 1]);
        }
    }
    t
}

fn evaluate(k: &RadialKernel, y: &[f64], n: usize, v: f64) -> Result<Evaluation> {
    let s = v / (2.0 * PI);
    let t = masses(y, n, s);
    let radii = t.iter().map(|&x| k.inverse(x)).collect::<Result<Vec<f64>>>()?;
    let lhs: f64 = radii.iter().map(|&a| k.g(a)).sum();
    let rhs = k.j(alternating_sum(&t))?;
    let vol = 2.0 * PI * radii.chunks(2).map(|p| Ok(k.primitive(p[0])? - k.primitive(p[1])?)).sum::<Result<f64>>()?;
    Ok(Evaluation {
        perimeter: 2.0 * PI * lhs,
        radii,
        slack: lhs - rhs,
        violation: (rhs - lhs) / (1.0 + lhs),
        holds: lhs >= rhs - SUPERADDITIVE_TOL * (1.0 + lhs),
        volume_error: (vol - v).abs() / v,
    })
}

struct Trial {
    best: Evaluation,
    evaluations: usize,
    min_slack: f64,
    max_violation: f64,
    holds: bool,
    max_volume_error: f64,
    trace: Vec<TraceRow>,
}

/// Nelder–Mead with restarts on collapse, capped at `max_iter` iterations.
fn run_trial(k: &RadialKernel, v: f64, opts: &CompeteOptions, trial: usize) -> Result<Trial> {
    let n = opts.n;
    let dim = 2 * n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(trial as u64);
    let mut start: Vec<f64> =
        (0..dim).map(|i| if i < n - 1 { rng.random_range(-2.0..2.0) } else { rng.random_range(-3.0..1.0) }).collect();

    let mut stats = Trial {
        best: evaluate(k, &start, n, v)?,
        evaluations: 1,
        min_slack: f64::INFINITY,
        max_violation: f64::NEG_INFINITY,
        holds: true,
        max_volume_error: 0.0,
        trace: Vec::new(),
    };
    stats.min_slack = stats.best.slack;
    stats.max_violation = stats.best.violation;
    stats.holds = stats.best.holds;
    stats.max_volume_error = stats.best.volume_error;
    let objective = |y: &[f64], st: &mut Trial| -> Result<f64> {
        let e = evaluate(k, y, n, v)?;
        st.evaluations += 1;
        st.min_slack = st.min_slack.min(e.slack);
        st.max_violation = st.max_violation.max(e.violation);
        st.holds &= e.holds;
        st.max_volume_error = st.max_volume_error.max(e.volume_error);
        let p = e.perimeter;
        if p < st.best.perimeter {
            st.best = e;
        }
        Ok(p)
    };

    let max_iter = 200 * n;
    let mut iter = 0;
    let mut last_restart_best = f64::INFINITY;
    while iter < max_iter {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let f0 = objective(&start, &mut stats)?;
        simplex.push((start.clone(), f0));
        for i in 0..dim {
            let mut p = start.clone();
            p[i] += 0.5;
            let f = objective(&p, &mut stats)?;
            simplex.push((p, f));
        }
        while iter < max_iter {
            iter += 1;
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if opts.trace {
                stats.trace.push(TraceRow { trial, iteration: iter, perimeter: simplex[0].1 });
            }
            let diameter = simplex[1..]
                .iter()
                .map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            let spread = simplex[dim].1 - simplex[0].1;
            if diameter < 1e-8 || spread <= 1e-15 * simplex[0].1.abs() {
                break;
            }
            let centroid: Vec<f64> =
                (0..dim).map(|j| simplex[..dim].iter().map(|(p, _)| p[j]).sum::<f64>() / dim as f64).collect();
            let along =
                |c: f64| -> Vec<f64> { centroid.iter().zip(&simplex[dim].0).map(|(m, w)| m + c * (m - w)).collect() };
            let xr = along(1.0);
            let fr = objective(&xr, &mut stats)?;
            if fr < simplex[0].1 {
                let xe = along(2.0);
                let fe = objective(&xe, &mut stats)?;
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[dim].1 {
                    let x = along(0.5);
                    let f = objective(&x, &mut stats)?;
                    (x, f)
                } else {
                    let x = along(-0.5);
                    let f = objective(&x, &mut stats)?;
                    (x, f)
                };
                if fc < simplex[dim].1.min(fr) {
                    simplex[dim] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        let p: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                        let f = objective(&p, &mut stats)?;
                        *vertex = (p, f);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        // restart around the best vertex unless the last restart gained nothing
        if !(simplex[0].1 < last_restart_best) {
            break;
        }
        last_restart_best = simplex[0].1;
        start = simplex[0].0.clone();
    }
    Ok(stats)
}

/// Multi-start search over unions of `n` centered annuli of volume `v`.
pub fn compete(d: &Density, v: f64, opts: CompeteOptions) -> Result<CompetitionResult> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Input(format!("v must be positive, got {v}")));
    }
    if opts.n == 0 || opts.trials == 0 {
        return Err(Error::Input("need at least one annulus and one trial".into()));
    }
    let s = v / (2.0 * PI);
    let reach = s * (1.0 + opts.n as f64 * MAX_LOG_GAP.exp()) * 1.01;
    let k = RadialKernel::covering(d, reach, opts.eps)?;
    let ball = profile_value(&k, v)?;
    let trials =
        (0..opts.trials).into_par_iter().map(|i| run_trial(&k, v, &opts, i)).collect::<Result<Vec<Trial>>>()?;
    let (best_trial, best) = trials
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.best.perimeter.total_cmp(&b.1.best.perimeter).then(a.0.cmp(&b.0)))
        .unwrap();
    Ok(CompetitionResult {
        v,
        r: ball.r,
        ball_perimeter: ball.perimeter,
        n: opts.n,
        trials: opts.trials,
        seed: opts.seed,
        best_trial,
        best_radii: best.best.radii.clone(),
        best_perimeter: best.best.perimeter,
        gap: best.best.perimeter - ball.perimeter,
        evaluations: trials.iter().map(|t| t.evaluations).sum(),
        min_superadditivity_slack: trials.iter().map(|t| t.min_slack).fold(f64::INFINITY, f64::min),
        max_superadditivity_violation: trials.iter().map(|t| t.max_violation).fold(f64::NEG_INFINITY, f64::max),
        superadditivity_holds: trials.iter().all(|t| t.holds),
        max_volume_error: trials.iter().map(|t| t.max_volume_error).fold(0.0, f64::max),
        trace: trials.into_iter().flat_map(|t| t.trace).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize, trials: usize) -> CompeteOptions {
        CompeteOptions { n, trials, seed: 7, eps: 1e-10, trace: false }
    }

    #[test]
    fn masses_keep_volume() {
        let s = 1.7;
        let t = masses(&[0.3, -1.0, 0.4, 2.0, -0.5], 3, s);
        assert!(t.windows(2).all(|w| w[0] > w[1]));
        assert!((alternating_sum(&t) - s).abs() < 1e-14);
    }

    #[test]
    fn flat_annulus_collapses_to_ball() {
        let r = compete(&Density::constant(0.0), PI, opts(1, 4)).unwrap();
        assert!((r.ball_perimeter - 2.0 * PI).abs() < 1e-12);
        assert!(r.gap >= -1e-7 && r.gap < 1e-2, "{}", r.gap);
        assert!(r.best_radii[1] < 0.1);
        assert!(r.superadditivity_holds && r.max_volume_error <= 1e-9);
    }

    #[test]
    fn quadratic_two_annuli() {
        let d = Density::power(1.0, 2.0, 0.0).unwrap();
        let r = compete(&d, PI * (std::f64::consts::E - 1.0), opts(2, 8)).unwrap();
        assert!(r.gap >= -1e-7);
        assert!(r.superadditivity_holds && r.max_volume_error <= 1e-9);
    }

    #[test]
    fn deterministic_across_runs() {
        let d = Density::linear(0.5, 0.0).unwrap();
        let a = compete(&d, 3.0, opts(2, 6)).unwrap();
        let b = compete(&d, 3.0, opts(2, 6)).unwrap();
        assert_eq!(a, b);
    }
}
