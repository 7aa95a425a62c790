use super::CapProfile;
use crate::bvp::{At, BvpSolution};
use crate::density::Side;
use crate::error::{Error, Result};
use crate::kernel::RadialKernel;
use crate::quad::{tanh_sinh, Tolerance};

/// `|τθ'|` above this counts as a vertical tangent.
const STEEP: f64 = 1e6;

/// Sampled planar curve with its polar and tangent data.
#[derive(Debug, Clone, Default)]
pub struct CurveSample {
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    /// Tangent angle.
    pub alpha: Vec<f64>,
    /// `α - θ`.
    pub sigma: Vec<f64>,
    /// Signed curvature, positive for left turns.
    pub k: Vec<f64>,
}

impl CurveSample {
    /// Builds the sample from ordered points; end values are one-sided.
    pub fn from_points(pts: &[(f64, f64)]) -> Result<Self> {
        let n = pts.len();
        if n < 3 {
            return Err(Error::Shape("a curve sample needs at least three points".into()));
        }
        let mut c = CurveSample::default();
        let mut s = 0.0;
        for i in 0..n {
            if i > 0 {
                let d = (pts[i].0 - pts[i - 1].0).hypot(pts[i].1 - pts[i - 1].1);
                if d == 0.0 {
                    return Err(Error::Shape(format!("repeated point at index {i}")));
                }
                s += d;
            }
            let (x, y) = pts[i];
            c.s.push(s);
            c.x.push(x);
            c.y.push(y);
            c.r.push(x.hypot(y));
            c.theta.push(y.atan2(x));
        }
        for i in 0..n {
            let (p, q) = (i.saturating_sub(1), (i + 1).min(n - 1));
            // tangent of the parabola through three neighbors, at the middle one
            let alpha = if i == 0 || i == n - 1 {
                (pts[q].1 - pts[p].1).atan2(pts[q].0 - pts[p].0)
            } else {
                let (h0, h1) = (c.s[i] - c.s[p], c.s[q] - c.s[i]);
                let w = |a: f64, b: f64, m: f64| -> f64 {
                    (-h1 / (h0 * (h0 + h1))) * a + ((h1 - h0) / (h0 * h1)) * m + (h0 / (h1 * (h0 + h1))) * b
                };
                let dx = w(pts[p].0, pts[q].0, pts[i].0);
                let dy = w(pts[p].1, pts[q].1, pts[i].1);
                dy.atan2(dx)
            };
            c.alpha.push(alpha);
            let sigma = wrap(alpha - c.theta[i]);
            c.sigma.push(sigma);
            c.k.push(if i == 0 || i == n - 1 { f64::NAN } else { menger(pts[p], pts[i], pts[q]) });
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `max |ṙ - cos σ|` and `max |rθ̇ - sin σ|` at interior points.
    pub fn identity_errors(&self) -> (f64, f64) {
        let mut e = (0.0f64, 0.0f64);
        for i in 1..self.len() - 1 {
            let ds = self.s[i + 1] - self.s[i - 1];
            let rdot = (self.r[i + 1] - self.r[i - 1]) / ds;
            let thdot = wrap(self.theta[i + 1] - self.theta[i - 1]) / ds;
            e.0 = e.0.max((rdot - self.sigma[i].cos()).abs());
            e.1 = e.1.max((self.r[i] * thdot - self.sigma[i].sin()).abs());
        }
        e
    }
}

fn wrap(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    (a + std::f64::consts::PI).rem_euclid(t) - std::f64::consts::PI
}

/// Signed curvature of the circle through three points.
fn menger(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
    let (ab, bc, ca) = ((b.0 - a.0).hypot(b.1 - a.1), (c.0 - b.0).hypot(c.1 - b.1), (a.0 - c.0).hypot(a.1 - c.1));
    2.0 * cross / (ab * bc * ca)
}

/// Per-node profile data along the upper boundary arc `φ = θ(τ)`,
/// traversed with decreasing `τ`.
#[derive(Debug, Clone)]
pub struct Kinematics {
    pub tau: Vec<f64>,
    /// `sin σ = -τθ'/√(1 + (τθ')²)`.
    pub u: Vec<f64>,
    /// Curvature of the boundary arc.
    pub curvature: Vec<f64>,
    /// `k + ϱ u`.
    pub generalized: Vec<f64>,
    /// Nodes left out for a vertical tangent or a jump.
    pub skipped: usize,
    pub curve: CurveSample,
}

/// Sine of the position-tangent angle and curvature along each smooth run
/// of the profile's upper boundary.
pub fn profile_kinematics(p: &CapProfile, k: &RadialKernel) -> Result<Kinematics> {
    let nodes: Vec<(f64, f64)> = p.nodes().collect();
    let mut out = Kinematics {
        tau: Vec::new(),
        u: Vec::new(),
        curvature: Vec::new(),
        generalized: Vec::new(),
        skipped: 0,
        curve: CurveSample::default(),
    };
    // smooth runs: maximal index ranges without repeated radii
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=nodes.len() {
        if i == nodes.len() || nodes[i].0 == nodes[i - 1].0 {
            runs.push(start..i);
            start = i;
        }
    }
    let mut all_points = Vec::new();
    for run in runs {
        let pts = &nodes[run];
        if pts.len() < 3 {
            out.skipped += pts.len();
            continue;
        }
        // decreasing τ
        let curve: Vec<(f64, f64)> =
            pts.iter().rev().map(|&(t, th)| (t * (th + p.rotation).cos(), t * (th + p.rotation).sin())).collect();
        let cs = CurveSample::from_points(&curve)?;
        let m = pts.len();
        for j in 1..m - 1 {
            let (t0, t1, t2) = (pts[j - 1].0, pts[j].0, pts[j + 1].0);
            let (a, b, c) = (pts[j - 1].1, pts[j].1, pts[j + 1].1);
            let (h0, h1) = (t1 - t0, t2 - t1);
            let dth = (-h1 / (h0 * (h0 + h1))) * a + ((h1 - h0) / (h0 * h1)) * b + (h0 / (h1 * (h0 + h1))) * c;
            let slope = t1 * dth;
            if !(slope.abs() < STEEP) {
                out.skipped += 1;
                continue;
            }
            let u = -slope / slope.hypot(1.0);
            let kc = cs.k[m - 1 - j];
            out.tau.push(t1);
            out.u.push(u);
            out.curvature.push(kc);
            out.generalized.push(kc + k.rho(t1, Side::Mean)? * u);
        }
        out.skipped += 2;
        all_points.extend(curve);
    }
    if all_points.len() >= 3 {
        out.curve = CurveSample::from_points(&all_points).unwrap_or_default();
    }
    Ok(out)
}

/// Profile whose boundary carries `sin σ = u` for a linear-problem solution,
/// from `θ' = -u/(τ√(1 - u²))` with `θ(a) = theta_start`. Nodes cluster at
/// both ends, where the integrand has square-root singularities.
pub fn profile_from_solution(sol: &BvpSolution, theta_start: f64, n: usize) -> Result<CapProfile> {
    let (a, b) = (sol.a, sol.b);
    let mut taus: Vec<f64> =
        (0..=n).map(|j| a + (b - a) * 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos())).collect();
    taus.extend(sol.breakpoints());
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let integrand = |at: At| -> f64 {
        let x = sol.x_of(at);
        match (sol.u(x), sol.one_minus(1.0, at), sol.one_minus(-1.0, at)) {
            (Ok(u), Ok(lo), Ok(hi)) if lo * hi > 0.0 => -u / (x * (lo * hi).sqrt()),
            _ => f64::NAN,
        }
    };
    let mut nodes = vec![(a, theta_start)];
    let mut theta = theta_start;
    for w in taus.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let est = tanh_sinh(
            |nd| {
                let at = if lo == a && nd.from_lo <= nd.from_hi {
                    At::FromLo(nd.from_lo)
                } else if hi == b && nd.from_hi < nd.from_lo {
                    At::FromHi(nd.from_hi)
                } else {
                    At::X(nd.x)
                };
                integrand(at)
            },
            lo,
            hi,
            Tolerance::new(1e-13, 1e-12),
        )?;
        theta += est.value;
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::Shape(format!("half-width {theta} leaves [0, pi] at radius {hi}")));
        }
        nodes.push((hi, theta));
    }
    CapProfile::new(0.0, &nodes)
}
