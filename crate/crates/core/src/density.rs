//! Radial log-convex densities `f = exp(h(|x|))` and standalone
//! nondecreasing coefficients `rho` on an interval.

use crate::error::{Error, Result};

/// Which one-sided slope of `h` to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `h = h0 + c`.
    Constant { c: f64 },
    /// `h = h0 + c t`.
    Linear { c: f64 },
    /// `h = h0 + c t^p`, `c >= 0`, `p >= 1`.
    Power { c: f64, p: f64 },
    /// `h = h0 + ` integral of the step slope, `breaks[0] = 0`, slope
    /// `slopes[i]` on `[breaks[i], breaks[i+1])`.
    PiecewiseLinear { breaks: Vec<f64>, slopes: Vec<f64> },
}

/// A density from the convex nondecreasing class, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    family: Family,
    h0: f64,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDensity(format!("{name} must be finite, got {v}")))
    }
}

impl Density {
    pub fn new(family: Family, h0: f64) -> Result<Self> {
        finite("h0", h0)?;
        match &family {
            Family::Constant { c } => finite("c", *c)?,
            Family::Linear { c } => {
                finite("c", *c)?;
                if *c < 0.0 {
                    return Err(Error::InvalidDensity(format!("linear slope must be >= 0, got {c}")));
                }
            }
            Family::Power { c, p } => {
                finite("c", *c)?;
                finite("p", *p)?;
                if *c < 0.0 {
                    return Err(Error::InvalidDensity(format!("power coefficient must be >= 0, got {c}")));
                }
                if *p < 1.0 {
                    return Err(Error::InvalidDensity(format!("power exponent must be >= 1, got {p}")));
                }
            }
            Family::PiecewiseLinear { breaks, slopes } => {
                if breaks.is_empty() || breaks.len() != slopes.len() {
                    return Err(Error::InvalidDensity(
                        "piecewise-linear needs matching, nonempty breakpoints and slopes".into(),
                    ));
                }
                if breaks[0] != 0.0 {
                    return Err(Error::InvalidDensity(format!("first breakpoint must be 0, got {}", breaks[0])));
                }
                for (i, (&t, &s)) in breaks.iter().zip(slopes).enumerate() {
                    finite("breakpoint", t)?;
                    finite("slope", s)?;
                    if s < 0.0 {
                        return Err(Error::InvalidDensity(format!("slope {i} is negative ({s})")));
                    }
                    if i > 0 && t <= breaks[i - 1] {
                        return Err(Error::InvalidDensity(format!("breakpoints must increase (index {i})")));
                    }
                    if i > 0 && s < slopes[i - 1] {
                        return Err(Error::InvalidDensity(format!(
                            "slopes must be nondecreasing for convexity (index {i})"
                        )));
                    }
                }
            }
        }
        Ok(Self { family, h0 })
    }

    pub fn constant(h0: f64) -> Self {
        Self { family: Family::Constant { c: 0.0 }, h0 }
    }

    pub fn linear(c: f64, h0: f64) -> Result<Self> {
        Self::new(Family::Linear { c }, h0)
    }

    pub fn power(c: f64, p: f64, h0: f64) -> Result<Self> {
        Self::new(Family::Power { c, p }, h0)
    }

    /// Piecewise-linear profile from `(breakpoint, slope)` pairs.
    pub fn piecewise_linear(pairs: &[(f64, f64)], h0: f64) -> Result<Self> {
        let (breaks, slopes) = pairs.iter().copied().unzip();
        Self::new(Family::PiecewiseLinear { breaks, slopes }, h0)
    }

    /// Builds a density from the flat parameter array used by density files.
    pub fn from_params(family: &str, params: &[f64], h0: f64) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidDensity(format!("family '{family}' takes {n} params, got {}", params.len())))
            }
        };
        match family {
            "constant" => {
                if params.len() > 1 {
                    want(1)?;
                }
                Self::new(Family::Constant { c: params.first().copied().unwrap_or(0.0) }, h0)
            }
            "linear" => {
                want(1)?;
                Self::linear(params[0], h0)
            }
            "power" => {
                want(2)?;
                Self::power(params[0], params[1], h0)
            }
            "piecewise-linear" => {
                if params.is_empty() || !params.len().is_multiple_of(2) {
                    return Err(Error::InvalidDensity("piecewise-linear params are (breakpoint, slope) pairs".into()));
                }
                let pairs: Vec<_> = params.chunks(2).map(|c| (c[0], c[1])).collect();
                Self::piecewise_linear(&pairs, h0)
            }
            other => Err(Error::InvalidDensity(format!("unknown family '{other}'"))),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    /// Same profile shifted by a constant.
    pub fn shifted(&self, dh: f64) -> Self {
        Self { family: self.family.clone(), h0: self.h0 + dh }
    }

    pub fn h(&self, t: f64) -> f64 {
        let level = match self.family {
            Family::Constant { c } => c,
            _ => 0.0,
        };
        self.h0 + level + self.h_increment(0.0, t)
    }

    /// `h(x + d) - h(x)` evaluated from `(x, d)` without cancellation.
    pub fn h_increment(&self, x: f64, d: f64) -> f64 {
        match &self.family {
            Family::Constant { .. } => 0.0,
            Family::Linear { c } => c * d,
            Family::Power { c, p } => {
                if x == 0.0 {
                    c * d.powf(*p)
                } else {
                    c * x.powf(*p) * (p * (d / x).ln_1p()).exp_m1()
                }
            }
            Family::PiecewiseLinear { breaks, slopes } => step_integral(breaks, slopes, x, x + d, d),
        }
    }

    /// `h(x) - h(x - d)` evaluated from `(x, d)` without cancellation.
    pub fn h_decrement(&self, x: f64, d: f64) -> f64 {
        match &self.family {
            Family::Constant { .. } => 0.0,
            Family::Linear { c } => c * d,
            Family::Power { c, p } => {
                if d >= x {
                    c * x.powf(*p)
                } else {
                    -c * x.powf(*p) * (p * (-d / x).ln_1p()).exp_m1()
                }
            }
            Family::PiecewiseLinear { breaks, slopes } => step_integral(breaks, slopes, x - d, x, d),
        }
    }

    /// One-sided slope of `h`.
    pub fn rho(&self, x: f64, side: Side) -> Result<f64> {
        check_side(x, side)?;
        Ok(match side {
            Side::Left => self.slope(x, false),
            Side::Right => self.slope(x, true),
            Side::Mean => 0.5 * (self.slope(x, false) + self.slope(x, true)),
        })
    }

    fn slope(&self, x: f64, right: bool) -> f64 {
        match &self.family {
            Family::Constant { .. } => 0.0,
            Family::Linear { c } => *c,
            Family::Power { c, p } => {
                if *p == 1.0 {
                    *c
                } else {
                    c * p * x.powf(p - 1.0)
                }
            }
            Family::PiecewiseLinear { breaks, slopes } => step_value(breaks, slopes, x, right),
        }
    }

    /// Points in `(lo, hi)` where `rho` may jump.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.family {
            Family::PiecewiseLinear { breaks, .. } => breaks.iter().copied().filter(|&t| t > lo && t < hi).collect(),
            _ => Vec::new(),
        }
    }

    /// `R = inf{rho > 0}`; `None` when `rho` vanishes identically.
    pub fn plateau_radius(&self) -> Option<f64> {
        match &self.family {
            Family::Constant { .. } => None,
            Family::Linear { c } | Family::Power { c, .. } => (*c > 0.0).then_some(0.0),
            Family::PiecewiseLinear { breaks, slopes } => slopes.iter().position(|&s| s > 0.0).map(|i| breaks[i]),
        }
    }
}

fn check_side(x: f64, side: Side) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("radius must be >= 0, got {x}")));
    }
    if x == 0.0 && side != Side::Right {
        return Err(Error::Domain("left limit requested at x = 0".into()));
    }
    Ok(())
}

/// Value of a right-continuous step function (levels start at `starts[i]`).
fn step_value(starts: &[f64], levels: &[f64], x: f64, right: bool) -> f64 {
    let i = if right { starts.partition_point(|&t| t <= x) } else { starts.partition_point(|&t| t < x) };
    levels[i.saturating_sub(1)]
}

/// Integral over `[lo, hi]` of the step function; `len` is `hi - lo` as
/// known exactly by the caller.
fn step_integral(starts: &[f64], levels: &[f64], lo: f64, hi: f64, len: f64) -> f64 {
    let first = starts.partition_point(|&t| t <= lo).saturating_sub(1);
    let last = starts.partition_point(|&t| t < hi).saturating_sub(1);
    if first == last {
        return levels[first] * len;
    }
    let mut sum = levels[first] * (starts[first + 1] - lo);
    for i in first + 1..last {
        sum += levels[i] * (starts[i + 1] - starts[i]);
    }
    sum + levels[last] * (hi - starts[last])
}

/// Representation of a nondecreasing bounded coefficient on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoRepr {
    Constant(f64),
    /// `alpha + beta t`.
    Affine {
        alpha: f64,
        beta: f64,
    },
    /// `levels[0]` before `jumps[0]`, `levels[i]` on `(jumps[i-1], jumps[i])`.
    Step {
        jumps: Vec<f64>,
        levels: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoFunction {
    a: f64,
    b: f64,
    repr: RhoRepr,
}

impl RhoFunction {
    pub fn new(a: f64, b: f64, repr: RhoRepr) -> Result<Self> {
        if !(a >= 0.0 && a < b && b.is_finite()) {
            return Err(Error::InvalidRho(format!("need 0 <= a < b, got [{a}, {b}]")));
        }
        match &repr {
            RhoRepr::Constant(c) => {
                if !(*c >= 0.0 && c.is_finite()) {
                    return Err(Error::InvalidRho(format!("constant level must be >= 0, got {c}")));
                }
            }
            RhoRepr::Affine { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::InvalidRho("affine coefficients must be finite".into()));
                }
                if *beta < 0.0 {
                    return Err(Error::InvalidRho(format!("affine slope must be >= 0, got {beta}")));
                }
                if alpha + beta * a < 0.0 {
                    return Err(Error::InvalidRho("affine coefficient is negative at a".into()));
                }
            }
            RhoRepr::Step { jumps, levels } => {
                if levels.len() != jumps.len() + 1 {
                    return Err(Error::InvalidRho("step needs one more level than jumps".into()));
                }
                for (i, &l) in levels.iter().enumerate() {
                    if !(l >= 0.0 && l.is_finite()) {
                        return Err(Error::InvalidRho(format!("level {i} must be >= 0, got {l}")));
                    }
                    if i > 0 && l < levels[i - 1] {
                        return Err(Error::InvalidRho(format!("levels must be nondecreasing (index {i})")));
                    }
                }
                for (i, &j) in jumps.iter().enumerate() {
                    if !(j > a && j < b) {
                        return Err(Error::InvalidRho(format!("jump {i} at {j} lies outside ({a}, {b})")));
                    }
                    if i > 0 && j <= jumps[i - 1] {
                        return Err(Error::InvalidRho(format!("jumps must increase (index {i})")));
                    }
                }
            }
        }
        Ok(Self { a, b, repr })
    }

    pub fn constant(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a, b, RhoRepr::Constant(c))
    }

    pub fn affine(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(a, b, RhoRepr::Affine { alpha, beta })
    }

    pub fn step(a: f64, b: f64, jumps: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        Self::new(a, b, RhoRepr::Step { jumps, levels })
    }

    /// `s · rho` for `s >= 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let repr = match &self.repr {
            RhoRepr::Constant(c) => RhoRepr::Constant(s * c),
            RhoRepr::Affine { alpha, beta } => RhoRepr::Affine { alpha: s * alpha, beta: s * beta },
            RhoRepr::Step { jumps, levels } => {
                RhoRepr::Step { jumps: jumps.clone(), levels: levels.iter().map(|l| s * l).collect() }
            }
        };
        Self::new(self.a, self.b, repr)
    }

    /// The slope of a density's profile restricted to `[a, b]`.
    pub fn from_density(d: &Density, a: f64, b: f64) -> Result<Self> {
        match d.family() {
            Family::Constant { .. } => Self::constant(a, b, 0.0),
            Family::Linear { c } => Self::constant(a, b, *c),
            Family::Power { c, p } if *p == 1.0 => Self::constant(a, b, *c),
            Family::Power { c, p } if *p == 2.0 => Self::affine(a, b, 0.0, 2.0 * c),
            Family::Power { p, .. } => {
                Err(Error::InvalidRho(format!("power exponent {p} has no constant, affine or step slope")))
            }
            Family::PiecewiseLinear { breaks, slopes } => {
                let mut jumps = Vec::new();
                let mut levels = vec![step_value(breaks, slopes, a, true)];
                for (&t, &s) in breaks.iter().zip(slopes) {
                    if t > a && t < b && s != *levels.last().unwrap() {
                        jumps.push(t);
                        levels.push(s);
                    }
                }
                Self::step(a, b, jumps, levels)
            }
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn repr(&self) -> &RhoRepr {
        &self.repr
    }

    /// The same coefficient on a subinterval.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        if a < self.a || b > self.b {
            return Err(Error::Domain(format!("[{a}, {b}] is not inside [{}, {}]", self.a, self.b)));
        }
        let repr = match &self.repr {
            RhoRepr::Step { jumps, levels } => {
                let mut js = Vec::new();
                let mut ls = vec![step_value_levels(jumps, levels, a, true)];
                for (i, &j) in jumps.iter().enumerate() {
                    if j > a && j < b {
                        js.push(j);
                        ls.push(levels[i + 1]);
                    }
                }
                RhoRepr::Step { jumps: js, levels: ls }
            }
            other => other.clone(),
        };
        Self::new(a, b, repr)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.sup() == 0.0
    }

    pub fn sup(&self) -> f64 {
        self.value(self.b, false)
    }

    fn value(&self, x: f64, right: bool) -> f64 {
        match &self.repr {
            RhoRepr::Constant(c) => *c,
            RhoRepr::Affine { alpha, beta } => alpha + beta * x,
            RhoRepr::Step { jumps, levels } => step_value_levels(jumps, levels, x, right),
        }
    }

    pub fn rho(&self, x: f64, side: Side) -> Result<f64> {
        check_side(x, side)?;
        if x < self.a || x > self.b {
            return Err(Error::Domain(format!("{x} outside [{}, {}]", self.a, self.b)));
        }
        if (x == self.a && side == Side::Left) || (x == self.b && side == Side::Right) {
            return Err(Error::Domain(format!("one-sided limit outside [{}, {}]", self.a, self.b)));
        }
        Ok(match side {
            Side::Left => self.value(x, false),
            Side::Right => self.value(x, true),
            Side::Mean => 0.5 * (self.value(x, false) + self.value(x, true)),
        })
    }

    /// `rho(a+)`.
    pub fn at_start(&self) -> f64 {
        self.value(self.a, true)
    }

    /// `rho(b-)`.
    pub fn at_end(&self) -> f64 {
        self.value(self.b, false)
    }

    /// Primitive with `h(a) = 0`.
    pub fn h(&self, t: f64) -> f64 {
        self.h_increment(self.a, t - self.a)
    }

    pub fn h_increment(&self, x: f64, d: f64) -> f64 {
        match &self.repr {
            RhoRepr::Constant(c) => c * d,
            RhoRepr::Affine { alpha, beta } => alpha * d + beta * d * (x + 0.5 * d),
            RhoRepr::Step { jumps, levels } => step_integral_levels(jumps, levels, x, x + d, d),
        }
    }

    pub fn h_decrement(&self, x: f64, d: f64) -> f64 {
        match &self.repr {
            RhoRepr::Constant(c) => c * d,
            RhoRepr::Affine { alpha, beta } => alpha * d + beta * d * (x - 0.5 * d),
            RhoRepr::Step { jumps, levels } => step_integral_levels(jumps, levels, x - d, x, d),
        }
    }

    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.repr {
            RhoRepr::Step { jumps, .. } => jumps.iter().copied().filter(|&t| t > lo && t < hi).collect(),
            _ => Vec::new(),
        }
    }
}

// Steps indexed by jump points: levels[0] is the value before jumps[0].
fn step_value_levels(jumps: &[f64], levels: &[f64], x: f64, right: bool) -> f64 {
    let i = if right { jumps.partition_point(|&t| t <= x) } else { jumps.partition_point(|&t| t < x) };
    levels[i]
}

fn step_integral_levels(jumps: &[f64], levels: &[f64], lo: f64, hi: f64, len: f64) -> f64 {
    let first = jumps.partition_point(|&t| t <= lo);
    let last = jumps.partition_point(|&t| t < hi);
    if first == last {
        return levels[first] * len;
    }
    let mut sum = levels[first] * (jumps[first] - lo);
    for i in first + 1..last {
        sum += levels[i] * (jumps[i] - jumps[i - 1]);
    }
    sum + levels[last] * (hi - jumps[last - 1])
}

/// Either source a radial kernel can be built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Density(Density),
    Rho { rho: RhoFunction, h_at_a: f64 },
}

impl Source {
    pub fn h(&self, t: f64) -> f64 {
        match self {
            Source::Density(d) => d.h(t),
            Source::Rho { rho, h_at_a } => h_at_a + rho.h(t),
        }
    }

    pub fn h_increment(&self, x: f64, d: f64) -> f64 {
        match self {
            Source::Density(den) => den.h_increment(x, d),
            Source::Rho { rho, .. } => rho.h_increment(x, d),
        }
    }

    pub fn h_decrement(&self, x: f64, d: f64) -> f64 {
        match self {
            Source::Density(den) => den.h_decrement(x, d),
            Source::Rho { rho, .. } => rho.h_decrement(x, d),
        }
    }

    pub fn rho(&self, x: f64, side: Side) -> Result<f64> {
        match self {
            Source::Density(d) => d.rho(x, side),
            Source::Rho { rho, .. } => rho.rho(x, side),
        }
    }

    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Source::Density(d) => d.breakpoints(lo, hi),
            Source::Rho { rho, .. } => rho.breakpoints(lo, hi),
        }
    }
}

impl From<Density> for Source {
    fn from(d: Density) -> Self {
        Source::Density(d)
    }
}

impl From<RhoFunction> for Source {
    fn from(rho: RhoFunction) -> Self {
        Source::Rho { rho, h_at_a: 0.0 }
    }
}

/// One-sided slope of `h` at `x` for either source kind.
pub fn eval_rho(src: &Source, x: f64, side: Side) -> Result<f64> {
    src.rho(x, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn one_sided_slopes_at_a_kink() {
        let d = Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0).unwrap();
        assert_eq!(d.rho(1.0, Side::Left).unwrap(), 0.0);
        assert_eq!(d.rho(1.0, Side::Right).unwrap(), 1.0);
        assert_eq!(d.rho(1.0, Side::Mean).unwrap(), 0.5);
        assert_eq!(d.plateau_radius(), Some(1.0));
    }

    #[test]
    fn power_and_constant() {
        let d = Density::power(1.0, 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(d.rho(1.5, Side::Mean).unwrap(), 3.0, epsilon = 1e-15);
        let c = Density::constant(0.3);
        for x in [0.5, 1.0, 7.0] {
            assert_eq!(c.rho(x, Side::Left).unwrap(), 0.0);
            assert_eq!(c.rho(x, Side::Right).unwrap(), 0.0);
        }
        assert_eq!(c.plateau_radius(), None);
    }

    #[test]
    fn domain_errors() {
        let d = Density::linear(1.0, 0.0).unwrap();
        assert!(d.rho(-1.0, Side::Right).is_err());
        assert!(d.rho(0.0, Side::Left).is_err());
        assert!(d.rho(0.0, Side::Right).is_ok());
    }

    #[test]
    fn rejects_nonconvex_and_decreasing() {
        assert!(Density::piecewise_linear(&[(0.0, 1.0), (1.0, 0.5)], 0.0).is_err());
        assert!(Density::linear(-1.0, 0.0).is_err());
        assert!(Density::power(1.0, 0.5, 0.0).is_err());
        assert!(RhoFunction::step(1.0, 3.0, vec![2.0], vec![1.0, 0.0]).is_err());
        assert!(RhoFunction::step(1.0, 3.0, vec![4.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn increments_match_differences() {
        let d = Density::power(0.7, 2.5, 0.1).unwrap();
        let (x, dx) = (1.3, 0.4);
        assert_abs_diff_eq!(d.h_increment(x, dx), d.h(x + dx) - d.h(x), epsilon = 1e-14);
        assert_abs_diff_eq!(d.h_decrement(x, dx), d.h(x) - d.h(x - dx), epsilon = 1e-14);
        let r = RhoFunction::step(1.0, 3.0, vec![1.5, 2.0], vec![0.0, 1.0, 3.0]).unwrap();
        assert_abs_diff_eq!(r.h(3.0), 0.5 + 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.h_increment(1.2, 1.0), 0.5 + 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(r.h_decrement(3.0, 1.2), 1.0 * 0.2 + 3.0, epsilon = 1e-15);
        let pl = Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)], 0.0).unwrap();
        assert_abs_diff_eq!(pl.h(3.0), 1.0 + 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pl.h_decrement(2.5, 2.0), 1.0 + 1.5, epsilon = 1e-15);
    }

    #[test]
    fn rho_from_density_and_restrict() {
        let pl = Density::piecewise_linear(&[(0.0, 0.0), (2.0, 1.0), (5.0, 2.0)], 0.0).unwrap();
        let r = RhoFunction::from_density(&pl, 1.0, 3.0).unwrap();
        assert_eq!(r.repr(), &RhoRepr::Step { jumps: vec![2.0], levels: vec![0.0, 1.0] });
        let s = r.restrict(2.5, 3.0).unwrap();
        assert_eq!(s.repr(), &RhoRepr::Step { jumps: vec![], levels: vec![1.0] });
        assert_eq!(r.at_start(), 0.0);
        assert_eq!(r.at_end(), 1.0);
        assert!(RhoFunction::from_density(&Density::power(1.0, 3.0, 0.0).unwrap(), 1.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn right_slope_is_monotone(
            slopes in proptest::collection::vec(0.0f64..2.0, 1..6),
            x1 in 0.0f64..10.0,
            dx in 0.0f64..5.0,
        ) {
            let mut acc = 0.0;
            let pairs: Vec<_> = slopes.iter().enumerate().map(|(i, s)| { acc += s; (i as f64, acc) }).collect();
            let d = Density::piecewise_linear(&pairs, 0.0).unwrap();
            let r1 = d.rho(x1, Side::Right).unwrap();
            let r2 = d.rho(x1 + dx, Side::Right).unwrap();
            prop_assert!(r1 <= r2);
            if x1 > 0.0 {
                prop_assert!(d.rho(x1, Side::Left).unwrap() <= r1);
            }
        }
    }
}
