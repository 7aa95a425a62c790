//! Planar shapes under a radial density: weighted volume and perimeter,
//! spherical cap symmetrization, and boundary-curve kinematics.

mod curve;
mod symmetrize;

pub use curve::{profile_from_solution, profile_kinematics, CurveSample, Kinematics};
pub use symmetrize::{symmetrize, symmetrize_raster, Raster, Symmetrized};

use std::f64::consts::PI;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::kernel::RadialKernel;
use crate::quad::{gauss_kronrod, tanh_sinh, Tolerance};

/// Which one-sided value of a profile to take at a node shared by a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Below,
    Above,
}

/// A set `{(τ, φ) : |φ - rotation| < θ(τ)}` with piecewise-linear angular
/// half-width `θ`. A repeated radius marks a jump of `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapProfile {
    pub rotation: f64,
    tau: Vec<f64>,
    theta: Vec<f64>,
}

impl CapProfile {
    pub fn new(rotation: f64, nodes: &[(f64, f64)]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Shape("a cap profile needs at least two nodes".into()));
        }
        for (i, &(t, th)) in nodes.iter().enumerate() {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Shape(format!("node {i}: radius {t} must be finite and nonnegative")));
            }
            if !(0.0..=PI).contains(&th) {
                return Err(Error::Shape(format!("node {i}: half-width {th} outside [0, pi]")));
            }
            if i > 0 && t < nodes[i - 1].0 {
                return Err(Error::Shape(format!("node {i}: radii must be nondecreasing")));
            }
            if i > 1 && t == nodes[i - 1].0 && t == nodes[i - 2].0 {
                return Err(Error::Shape(format!("node {i}: a radius may repeat at most once")));
            }
        }
        if nodes[0].0 == nodes[nodes.len() - 1].0 {
            return Err(Error::Shape("a cap profile needs a radial extent".into()));
        }
        Ok(Self { rotation, tau: nodes.iter().map(|n| n.0).collect(), theta: nodes.iter().map(|n| n.1).collect() })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.tau.iter().copied().zip(self.theta.iter().copied())
    }

    pub fn inner(&self) -> f64 {
        self.tau[0]
    }

    pub fn outer(&self) -> f64 {
        *self.tau.last().unwrap()
    }

    /// Radii where `θ` may fail to be smooth.
    pub fn knots(&self) -> Vec<f64> {
        let mut k = self.tau.clone();
        k.dedup();
        k
    }

    /// Half-width at `t`, zero outside the profile.
    pub fn theta_at(&self, t: f64, limit: Limit) -> f64 {
        let n = self.tau.len();
        if t < self.tau[0] || t > self.tau[n - 1] {
            return 0.0;
        }
        let i = match limit {
            Limit::Below => self.tau.partition_point(|&x| x < t),
            Limit::Above => self.tau.partition_point(|&x| x <= t),
        };
        match limit {
            Limit::Below if i == 0 => 0.0,
            Limit::Above if i == n => 0.0,
            Limit::Below if self.tau[i] == t => self.theta[i],
            Limit::Above if i > 0 && self.tau[i - 1] == t => self.theta[i - 1],
            _ => {
                let (t0, t1) = (self.tau[i - 1], self.tau[i]);
                let (a, b) = (self.theta[i - 1], self.theta[i]);
                a + (b - a) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Smooth pieces `(τ₀, τ₁, θ₀, θ₁)` with `τ₀ < τ₁`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.tau.len() - 1)
            .filter(|&i| self.tau[i] < self.tau[i + 1])
            .map(|i| (self.tau[i], self.tau[i + 1], self.theta[i], self.theta[i + 1]))
    }

    /// Discontinuities `(τ, θ below, θ above)`, including the two ends where
    /// the profile meets the empty set.
    pub fn jumps(&self) -> Vec<(f64, f64, f64)> {
        let n = self.tau.len();
        let mut out = vec![(self.tau[0], 0.0, self.theta[0])];
        for i in 1..n {
            if self.tau[i] == self.tau[i - 1] {
                out.push((self.tau[i], self.theta[i - 1], self.theta[i]));
            }
        }
        out.push((self.tau[n - 1], self.theta[n - 1], 0.0));
        out.retain(|j| j.1 != j.2);
        out
    }

    /// `L(τ) = 2τθ(τ)`.
    pub fn length(&self, t: f64) -> f64 {
        2.0 * t * self.theta_at(t, Limit::Above)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    CenteredBall { r: f64 },
    Annulus { inner: f64, outer: f64 },
    OffCenterBall { cx: f64, cy: f64, r: f64 },
    Cap(CapProfile),
}

impl Component {
    fn validate(&self) -> Result<()> {
        match *self {
            Component::CenteredBall { r } | Component::OffCenterBall { r, .. } if !(r > 0.0 && r.is_finite()) => {
                Err(Error::Shape(format!("radius {r} must be positive")))
            }
            Component::OffCenterBall { cx, cy, .. } if !(cx.is_finite() && cy.is_finite()) => {
                Err(Error::Shape("center must be finite".into()))
            }
            Component::Annulus { inner, outer } if !(inner >= 0.0 && inner < outer && outer.is_finite()) => {
                Err(Error::Shape(format!("annulus radii must satisfy 0 <= inner < outer, got ({inner}, {outer})")))
            }
            _ => Ok(()),
        }
    }

    pub fn outer_radius(&self) -> f64 {
        match self {
            Component::CenteredBall { r } => *r,
            Component::Annulus { outer, .. } => *outer,
            Component::OffCenterBall { cx, cy, r } => cx.hypot(*cy) + r,
            Component::Cap(p) => p.outer(),
        }
    }

    pub fn inner_radius(&self) -> f64 {
        match self {
            Component::CenteredBall { .. } => 0.0,
            Component::Annulus { inner, .. } => *inner,
            Component::OffCenterBall { cx, cy, r } => (cx.hypot(*cy) - r).max(0.0),
            Component::Cap(p) => p.inner(),
        }
    }

    /// The circular section at radius `t` as `(center angle, half-width)`.
    pub fn arc_at(&self, t: f64, limit: Limit) -> Option<(f64, f64)> {
        match *self {
            Component::CenteredBall { r } => (t < r || (t == r && limit == Limit::Below)).then_some((0.0, PI)),
            Component::Annulus { inner, outer } => {
                let inside = (t > inner && t < outer)
                    || (t == inner && limit == Limit::Above)
                    || (t == outer && limit == Limit::Below);
                inside.then_some((0.0, PI))
            }
            Component::OffCenterBall { cx, cy, r } => {
                let half = off_center_half_width(cx.hypot(cy), r, t);
                (half > 0.0).then(|| (cy.atan2(cx), half))
            }
            Component::Cap(ref p) => {
                let half = p.theta_at(t, limit);
                (half > 0.0).then_some((p.rotation, half))
            }
        }
    }

    /// Membership of a point (open set).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let t = x.hypot(y);
        match *self {
            Component::OffCenterBall { cx, cy, r } => (x - cx).hypot(y - cy) < r,
            _ => match self.arc_at(t, Limit::Above) {
                Some((c, w)) => angle_gap(y.atan2(x), c) < w,
                None => false,
            },
        }
    }
}

/// Half-width of the section of the disk `B((c, 0), r)` at radius `t`.
pub fn off_center_half_width(c: f64, r: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t < r - c {
        return PI;
    }
    if t <= (c - r).abs() || t >= c + r {
        return 0.0;
    }
    ((t * t + c * c - r * r) / (2.0 * t * c)).clamp(-1.0, 1.0).acos()
}

/// Unsigned angular distance in `[0, π]`.
pub fn angle_gap(p: f64, q: f64) -> f64 {
    let d = (p - q).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// A finite union of components, verified pairwise disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeUnion {
    pub components: Vec<Component>,
    pub disjoint: bool,
}

/// Radii sampled per pair when testing overlap.
const OVERLAP_SAMPLES: usize = 2048;

impl ShapeUnion {
    /// Validates each component and checks pairwise disjointness.
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Shape("a shape needs at least one component".into()));
        }
        for (i, c) in components.iter().enumerate() {
            c.validate().map_err(|e| Error::Shape(format!("component {i}: {e}")))?;
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if let Some(t) = overlap_radius(&components[i], &components[j]) {
                    return Err(Error::Shape(format!("components {i} and {j} overlap near radius {t}")));
                }
            }
        }
        Ok(Self { components, disjoint: true })
    }

    pub fn single(c: Component) -> Result<Self> {
        Self::new(vec![c])
    }

    pub fn outer_radius(&self) -> f64 {
        self.components.iter().map(Component::outer_radius).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.components.iter().any(|c| c.contains(x, y))
    }
}

fn overlap_radius(p: &Component, q: &Component) -> Option<f64> {
    let lo = p.inner_radius().max(q.inner_radius());
    let hi = p.outer_radius().min(q.outer_radius());
    if !(lo < hi) {
        return None;
    }
    let mut radii: Vec<f64> =
        (0..OVERLAP_SAMPLES).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / OVERLAP_SAMPLES as f64).collect();
    for c in [p, q] {
        if let Component::Cap(cp) = c {
            let ks = cp.knots();
            radii.extend(ks.windows(2).map(|w| 0.5 * (w[0] + w[1])).filter(|&t| t > lo && t < hi));
        }
    }
    radii.into_iter().find(|&t| match (p.arc_at(t, Limit::Above), q.arc_at(t, Limit::Above)) {
        (Some((c1, w1)), Some((c2, w2))) => angle_gap(c1, c2) < w1 + w2 - 1e-12,
        _ => false,
    })
}

/// Kernel over `[0, R]` large enough for the shape.
pub fn kernel_for(shape: &ShapeUnion, d: &Density, eps: f64) -> Result<RadialKernel> {
    RadialKernel::from_density(d, shape.outer_radius() * (1.0 + 1e-12) + 1e-300, eps)
}

fn covers(k: &RadialKernel, t: f64) -> Result<()> {
    let (lo, hi) = k.domain();
    if lo != 0.0 || t > hi {
        return Err(Error::Domain(format!("kernel on [{lo}, {hi}] does not cover radius {t} from the origin")));
    }
    Ok(())
}

fn tol(k: &RadialKernel) -> Tolerance {
    Tolerance::new(1e-15, k.eps().min(1e-13))
}

/// Splits `[lo, hi]` at the density breakpoints.
fn panels(k: &RadialKernel, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![lo];
    cuts.extend(k.breakpoints().into_iter().filter(|&t| t > lo && t < hi));
    cuts.push(hi);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `V_f` of one component.
pub fn component_volume(c: &Component, k: &RadialKernel) -> Result<f64> {
    covers(k, c.outer_radius())?;
    match c {
        Component::CenteredBall { r } => Ok(2.0 * PI * k.primitive(*r)?),
        Component::Annulus { inner, outer } => Ok(2.0 * PI * k.integral(*inner, *outer)?),
        Component::OffCenterBall { cx, cy, r } => off_center_volume(cx.hypot(*cy), *r, k),
        Component::Cap(p) => {
            let mut sum = 0.0;
            for (t0, t1, a, b) in p.segments() {
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                let slope = (b - a) / (t1 - t0);
                for (lo, hi) in panels(k, t0, t1) {
                    let e = gauss_kronrod(|t| 2.0 * (a + slope * (t - t0)) * k.g(t), lo, hi, tol(k))?;
                    sum += e.value;
                }
            }
            Ok(sum)
        }
    }
}

fn off_center_volume(c: f64, r: f64, k: &RadialKernel) -> Result<f64> {
    if c == 0.0 {
        return Ok(2.0 * PI * k.primitive(r)?);
    }
    let core = (r - c).max(0.0);
    let mut sum = 2.0 * PI * k.primitive(core)?;
    for (lo, hi) in panels(k, (c - r).abs(), c + r) {
        let e = tanh_sinh(|n| 2.0 * off_center_half_width(c, r, n.x) * k.g(n.x), lo, hi, tol(k))?;
        sum += e.value;
    }
    Ok(sum)
}

/// `P_f` of one component taken alone.
pub fn component_perimeter(c: &Component, k: &RadialKernel) -> Result<f64> {
    covers(k, c.outer_radius())?;
    match c {
        Component::CenteredBall { r } => Ok(2.0 * PI * k.g(*r)),
        Component::Annulus { inner, outer } => Ok(2.0 * PI * (k.g(*inner) + k.g(*outer))),
        Component::OffCenterBall { cx, cy, r } => off_center_perimeter(cx.hypot(*cy), *r, k),
        Component::Cap(p) => cap_perimeter(p, k),
    }
}

fn off_center_perimeter(c: f64, r: f64, k: &RadialKernel) -> Result<f64> {
    if c == 0.0 {
        return Ok(2.0 * PI * k.g(r));
    }
    // φ is the angle at the disk center; the radius along the circle is
    // monotone in φ on [0, π]
    let radius = |phi: f64| (c * c + r * r + 2.0 * c * r * phi.cos()).max(0.0).sqrt();
    let mut cuts = vec![0.0];
    let mut inner: Vec<f64> = k
        .breakpoints()
        .into_iter()
        .filter(|&t| t > (c - r).abs() && t < c + r)
        .map(|t| ((t * t - c * c - r * r) / (2.0 * c * r)).clamp(-1.0, 1.0).acos())
        .collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(PI);
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        sum += gauss_kronrod(|phi| k.f(radius(phi)), w[0], w[1], tol(k))?.value;
    }
    Ok(2.0 * r * sum)
}

fn cap_perimeter(p: &CapProfile, k: &RadialKernel) -> Result<f64> {
    let mut sum = 0.0;
    for (t0, t1, a, b) in p.segments() {
        if (a == 0.0 && b == 0.0) || (a == PI && b == PI) {
            continue;
        }
        let slope = (b - a) / (t1 - t0);
        for (lo, hi) in panels(k, t0, t1) {
            let e = gauss_kronrod(|t| 2.0 * k.f(t) * (t * slope).hypot(1.0), lo, hi, tol(k))?;
            sum += e.value;
        }
    }
    for (t, below, above) in p.jumps() {
        sum += 2.0 * t * (above - below).abs() * k.f(t);
    }
    Ok(sum)
}

/// `V_f` of a shape.
pub fn weighted_volume(s: &ShapeUnion, k: &RadialKernel) -> Result<f64> {
    s.components.iter().map(|c| component_volume(c, k)).sum()
}

/// `P_f` of a shape; components must be disjoint.
pub fn weighted_perimeter(s: &ShapeUnion, k: &RadialKernel) -> Result<f64> {
    if !s.disjoint {
        return Err(Error::Shape("perimeter needs disjoint components".into()));
    }
    s.components.iter().map(|c| component_perimeter(c, k)).sum()
}

/// Radius of the off-center ball with center distance `c` and volume `v`.
pub fn off_center_radius_for_volume(c: f64, v: f64, k: &RadialKernel) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("volume {v} must be positive")));
    }
    let (_, hi) = k.domain();
    let vol = |r: f64| off_center_volume(c, r, k).map(|x| x - v).unwrap_or(f64::NAN);
    let r_max = hi - c;
    if !(r_max > 0.0) || vol(r_max) < 0.0 {
        return Err(Error::Domain(format!("kernel too small for a ball of volume {v} at distance {c}")));
    }
    crate::quad::bracket_root(vol, 0.0, r_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Density;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn flat(r: f64) -> RadialKernel {
        RadialKernel::from_density(&Density::constant(0.0), r, 1e-12).unwrap()
    }

    #[test]
    fn balls_and_annuli() {
        let k = flat(4.0);
        let ball = ShapeUnion::single(Component::CenteredBall { r: 1.0 }).unwrap();
        assert_abs_diff_eq!(weighted_volume(&ball, &k).unwrap(), PI, epsilon = 1e-13);
        assert_abs_diff_eq!(weighted_perimeter(&ball, &k).unwrap(), 2.0 * PI, epsilon = 1e-13);
        let ann = ShapeUnion::single(Component::Annulus { inner: 1.0, outer: 2.0 }).unwrap();
        assert_abs_diff_eq!(weighted_volume(&ann, &k).unwrap(), 3.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(weighted_perimeter(&ann, &k).unwrap(), 6.0 * PI, epsilon = 1e-12);
        let sq = Density::power(1.0, 2.0, 0.0).unwrap();
        let kq = RadialKernel::from_density(&sq, 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(weighted_volume(&ball, &kq).unwrap(), PI * (E - 1.0), epsilon = 1e-11);
        // same area as the unit ball, larger boundary
        let a2 = ShapeUnion::single(Component::Annulus { inner: 1.0, outer: 2f64.sqrt() }).unwrap();
        assert!(weighted_perimeter(&a2, &k).unwrap() > 2.0 * PI);
    }

    #[test]
    fn half_disk_profile() {
        let k = flat(2.0);
        let p = CapProfile::new(0.0, &[(0.0, PI / 2.0), (1.0, PI / 2.0)]).unwrap();
        let s = ShapeUnion::single(Component::Cap(p)).unwrap();
        assert_abs_diff_eq!(weighted_perimeter(&s, &k).unwrap(), PI + 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(weighted_volume(&s, &k).unwrap(), PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn off_center_ball_matches_lebesgue() {
        let k = flat(4.0);
        for &(cx, r) in &[(2.0, 1.0), (0.5, 1.0), (1.0, 1.0)] {
            let c = Component::OffCenterBall { cx, cy: 0.3, r };
            assert_abs_diff_eq!(component_volume(&c, &k).unwrap(), PI * r * r, epsilon = 1e-10);
            assert_abs_diff_eq!(component_perimeter(&c, &k).unwrap(), 2.0 * PI * r, epsilon = 1e-11);
        }
    }

    #[test]
    fn off_center_ball_under_a_kink() {
        let d = Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0).unwrap();
        let k = RadialKernel::from_density(&d, 3.0, 1e-12).unwrap();
        let r = off_center_radius_for_volume(0.9, PI / 4.0, &k).unwrap();
        let c = Component::OffCenterBall { cx: 0.9, cy: 0.0, r };
        assert_abs_diff_eq!(component_volume(&c, &k).unwrap(), PI / 4.0, epsilon = 1e-11);
        assert!(component_perimeter(&c, &k).unwrap() > PI + 1e-4);
    }

    #[test]
    fn overlap_is_rejected() {
        let a = Component::OffCenterBall { cx: 1.0, cy: 0.0, r: 0.5 };
        let b = Component::OffCenterBall { cx: 1.6, cy: 0.0, r: 0.5 };
        assert!(ShapeUnion::new(vec![a.clone(), b]).is_err());
        let c = Component::Annulus { inner: 2.0, outer: 3.0 };
        assert!(ShapeUnion::new(vec![a, c]).is_ok());
    }

    #[test]
    fn profile_queries() {
        let p = CapProfile::new(0.0, &[(1.0, 0.5), (2.0, 1.0), (2.0, 0.2), (3.0, 0.2)]).unwrap();
        assert_abs_diff_eq!(p.theta_at(1.5, Limit::Above), 0.75, epsilon = 1e-15);
        assert_eq!(p.theta_at(2.0, Limit::Below), 1.0);
        assert_eq!(p.theta_at(2.0, Limit::Above), 0.2);
        assert_eq!(p.theta_at(3.5, Limit::Above), 0.0);
        assert_eq!(p.jumps(), vec![(1.0, 0.0, 0.5), (2.0, 1.0, 0.2), (3.0, 0.2, 0.0)]);
        assert!(CapProfile::new(0.0, &[(1.0, 4.0), (2.0, 1.0)]).is_err());
        assert!(CapProfile::new(0.0, &[(2.0, 1.0), (1.0, 1.0)]).is_err());
    }
}
