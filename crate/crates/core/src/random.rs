//! Seeded generators for coefficients, densities and shapes.
//!
//! Every instance `i` of a suite draws from its own ChaCha8 stream
//! `(seed, i)`, so results do not depend on scheduling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::density::{Density, RhoFunction};
use crate::error::Result;
use crate::geometry::{CapProfile, Component, ShapeUnion};

pub const DEFAULT_SEED: u64 = 20240917;

/// Largest number of jumps in a random step coefficient.
pub const MAX_JUMPS: usize = 8;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    Exp1.sample(rng)
}

/// Random interval `a ~ U(0.1, 9.5)`, `b ~ U(a + 0.25, 10)`.
pub fn interval(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a = rng.random_range(0.1..9.5);
    let b = rng.random_range(a + 0.25..=10.0);
    (a, b)
}

/// Nondecreasing step coefficient on `[a, b]`: up to eight jumps at uniform
/// positions, first level 0 or `Exp(1)` with equal odds, `Exp(1)` increments.
pub fn step_rho(rng: &mut ChaCha8Rng, a: f64, b: f64) -> Result<RhoFunction> {
    let n = rng.random_range(0..=MAX_JUMPS);
    let mut jumps: Vec<f64> = (0..n).map(|_| rng.random_range(a..b)).filter(|&x| x > a).collect();
    jumps.sort_by(f64::total_cmp);
    jumps.dedup();
    let mut level = if rng.random_bool(0.5) { 0.0 } else { exp1(rng) };
    let mut levels = vec![level];
    for _ in &jumps {
        level += exp1(rng);
        levels.push(level);
    }
    RhoFunction::step(a, b, jumps, levels)
}

/// Random convex nondecreasing density of one of the four families.
pub fn density(rng: &mut ChaCha8Rng) -> Result<Density> {
    let h0 = rng.random_range(-1.0..1.0);
    match rng.random_range(0..4) {
        0 => Ok(Density::constant(h0)),
        1 => Density::linear(exp1(rng), h0),
        2 => Density::power(0.5 * exp1(rng), rng.random_range(1.0..3.0), h0),
        _ => {
            let n = rng.random_range(1..=4);
            let mut t = 0.0;
            let mut s = if rng.random_bool(0.5) { 0.0 } else { 0.5 * exp1(rng) };
            let mut pairs = vec![(0.0, s)];
            for _ in 1..n {
                t += rng.random_range(0.2..1.5);
                s += exp1(rng);
                pairs.push((t, s));
            }
            Density::piecewise_linear(&pairs, h0)
        }
    }
}

/// Union of 2 to 5 caps in disjoint angular sectors, each with a random
/// piecewise-linear half-width, possibly with one jump.
pub fn multi_bump(rng: &mut ChaCha8Rng) -> Result<ShapeUnion> {
    let k = rng.random_range(2..=5);
    let mut cuts: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut comps = Vec::with_capacity(k);
    for i in 0..k {
        let lo = cuts[i];
        let hi = if i + 1 < k { cuts[i + 1] } else { cuts[0] + 2.0 * PI };
        let rotation = 0.5 * (lo + hi);
        let half_max = 0.45 * (hi - lo);
        let r0 = rng.random_range(0.05..2.0);
        let r1 = r0 + rng.random_range(0.3..1.5);
        let m = rng.random_range(2..=6);
        let mut nodes = Vec::with_capacity(m + 1);
        for j in 0..m {
            let t = r0 + (r1 - r0) * j as f64 / (m - 1) as f64;
            nodes.push((t, rng.random_range(0.0..half_max)));
            if j > 0 && j + 1 < m && rng.random_bool(0.3) {
                nodes.push((t, rng.random_range(0.0..half_max)));
            }
        }
        comps.push(Component::Cap(CapProfile::new(rotation, &nodes)?));
    }
    ShapeUnion::new(comps)
}
