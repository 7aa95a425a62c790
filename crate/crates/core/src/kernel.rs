//! Tabulated radial kernel: `f = e^h`, `g = x f`, `G = ∫ g`, `G⁻¹` and
//! `J = g ∘ G⁻¹`.

use crate::density::{Density, Family, RhoFunction, Side, Source};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, Tolerance};

pub const DEFAULT_EPS: f64 = 1e-10;

/// Number of table panels between consecutive breakpoints (at least).
const PANELS: usize = 64;

#[derive(Debug, Clone)]
pub struct RadialKernel {
    src: Source,
    lo: f64,
    hi: f64,
    eps: f64,
    knots: Vec<f64>,
    cum: Vec<f64>,
}

impl RadialKernel {
    /// Builds the cumulative table of `∫_lo g` on `[lo, hi]`.
    pub fn new(src: impl Into<Source>, lo: f64, hi: f64, eps: f64) -> Result<Self> {
        let src = src.into();
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {eps}")));
        }
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::Domain(format!("kernel domain needs 0 <= lo < hi, got [{lo}, {hi}]")));
        }
        if let Source::Rho { rho, .. } = &src {
            if lo < rho.a() || hi > rho.b() {
                return Err(Error::Domain(format!(
                    "kernel domain [{lo}, {hi}] exceeds coefficient domain [{}, {}]",
                    rho.a(),
                    rho.b()
                )));
            }
        }
        let mut cuts = vec![lo];
        cuts.extend(src.breakpoints(lo, hi));
        cuts.push(hi);
        let step = (hi - lo) / PANELS as f64;
        let mut knots = vec![lo];
        for w in cuts.windows(2) {
            let n = ((w[1] - w[0]) / step).ceil().max(1.0) as usize;
            for k in 1..n {
                knots.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
            }
            knots.push(w[1]);
        }
        let mut k = Self { src, lo, hi, eps, knots, cum: Vec::new() };
        let mut cum = vec![0.0];
        let mut acc = 0.0;
        for w in k.knots.windows(2) {
            acc += k.smooth_integral(w[0], w[1])?;
            cum.push(acc);
        }
        k.cum = cum;
        Ok(k)
    }

    /// Kernel of a density on `[0, hi]`.
    pub fn from_density(d: &Density, hi: f64, eps: f64) -> Result<Self> {
        Self::new(d.clone(), 0.0, hi, eps)
    }

    /// Kernel of a density whose domain reaches `G(hi) >= s`, grown by doubling.
    pub fn covering(d: &Density, s: f64, eps: f64) -> Result<Self> {
        let mut hi = 1.0;
        for _ in 0..200 {
            let k = Self::from_density(d, hi, eps)?;
            if k.total() >= s {
                return Ok(k);
            }
            hi *= 2.0;
        }
        Err(Error::Domain(format!("no finite radius reaches G = {s}")))
    }

    /// Kernel of a coefficient on its own interval, normalized `h(a) = h_at_a`.
    pub fn from_rho(rho: &RhoFunction, h_at_a: f64, eps: f64) -> Result<Self> {
        let (a, b) = (rho.a(), rho.b());
        Self::new(Source::Rho { rho: rho.clone(), h_at_a }, a, b, eps)
    }

    fn quad_tol(&self) -> Tolerance {
        Tolerance::new(0.0, self.eps.min(1e-14))
    }

    // Integral of g over an interval on which rho is continuous.
    fn smooth_integral(&self, x: f64, y: f64) -> Result<f64> {
        if x == 0.0 {
            if let Some(v) = self.power_series(y) {
                return Ok(v);
            }
        }
        gauss_kronrod(|t| self.g(t), x, y, self.quad_tol()).map(|e| e.value)
    }

    // `∫_0^y t e^{h0 + c t^p} dt` term by term. `t^p` is not smooth at 0 for
    // fractional `p`, which stalls adaptive quadrature; the series has only
    // positive terms.
    fn power_series(&self, y: f64) -> Option<f64> {
        let Source::Density(d) = &self.src else { return None };
        let Family::Power { c, p } = *d.family() else { return None };
        let z = c * y.powf(p);
        if !(z <= 40.0) {
            return None;
        }
        let (mut a, mut sum) = (1.0, 0.5);
        for n in 1..400 {
            a *= z / n as f64;
            let term = a / (n as f64 * p + 2.0);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        Some(d.h0().exp() * y * y * sum)
    }

    pub fn source(&self) -> &Source {
        &self.src
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn h(&self, x: f64) -> f64 {
        self.src.h(x)
    }

    pub fn f(&self, x: f64) -> f64 {
        self.src.h(x).exp()
    }

    pub fn g(&self, x: f64) -> f64 {
        x * self.f(x)
    }

    pub fn rho(&self, x: f64, side: Side) -> Result<f64> {
        self.src.rho(x, side)
    }

    /// `g' = (1/x + rho) g` from the chosen side.
    pub fn dg(&self, x: f64, side: Side) -> Result<f64> {
        Ok(self.f(x) + self.g(x) * self.rho(x, side)?)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.src.breakpoints(self.lo, self.hi)
    }

    /// `g(x + d) - g(x)` without cancellation.
    pub fn g_increment(&self, x: f64, d: f64) -> f64 {
        let dh = self.src.h_increment(x, d);
        let fx = self.f(x);
        d * fx * dh.exp() + x * fx * dh.exp_m1()
    }

    /// `g(x) - g(x - d)` without cancellation.
    pub fn g_decrement(&self, x: f64, d: f64) -> f64 {
        let dh = self.src.h_decrement(x, d);
        let fx = self.f(x);
        d * fx * (-dh).exp() - x * fx * (-dh).exp_m1()
    }

    fn panel(&self, x: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= x);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn check(&self, x: f64) -> Result<()> {
        if x < self.lo || x > self.hi || x.is_nan() {
            Err(Error::Domain(format!("{x} outside kernel domain [{}, {}]", self.lo, self.hi)))
        } else {
            Ok(())
        }
    }

    /// `∫_lo^x g`; for a density kernel this is `G(x)`.
    pub fn primitive(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let i = self.panel(x);
        let k = self.knots[i];
        if x == k {
            return Ok(self.cum[i]);
        }
        let next = self.knots[i + 1];
        // integrate from whichever panel end is nearer
        if x - k <= next - x {
            Ok(self.cum[i] + self.smooth_integral(k, x)?)
        } else {
            Ok(self.cum[i + 1] - self.smooth_integral(x, next)?)
        }
    }

    /// `∫_lo^hi g`.
    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// `∫_x^y g` for `x <= y`.
    pub fn integral(&self, x: f64, y: f64) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        if y < x {
            return Ok(-self.integral(y, x)?);
        }
        if self.panel(x) == self.panel(y) || y - x <= (self.hi - self.lo) / PANELS as f64 {
            return self.split_integral(x, y - x, false);
        }
        Ok(self.primitive(y)? - self.primitive(x)?)
    }

    // Offset-space integral over [x, x + d] (or [x - d, x] when `back`),
    // split at breakpoints.
    fn split_integral(&self, x: f64, d: f64, back: bool) -> Result<f64> {
        let (lo, hi) = if back { (x - d, x) } else { (x, x + d) };
        let mut offs = vec![0.0];
        for b in self.src.breakpoints(lo, hi) {
            offs.push(if back { x - b } else { b - x });
        }
        offs.push(d);
        offs.sort_by(f64::total_cmp);
        let sign = if back { -1.0 } else { 1.0 };
        let mut sum = 0.0;
        for w in offs.windows(2) {
            if w[1] > w[0] {
                sum += gauss_kronrod(|s| self.g(x + sign * s), w[0], w[1], self.quad_tol())?.value;
            }
        }
        Ok(sum)
    }

    /// `∫_x^{x+d} g`, accurate in relative terms for small `d`.
    pub fn integral_fwd(&self, x: f64, d: f64) -> Result<f64> {
        if d <= (self.hi - self.lo) / PANELS as f64 {
            self.split_integral(x, d, false)
        } else {
            self.integral(x, (x + d).min(self.hi))
        }
    }

    /// `∫_{x-d}^x g`, accurate in relative terms for small `d`.
    pub fn integral_back(&self, x: f64, d: f64) -> Result<f64> {
        if d <= (self.hi - self.lo) / PANELS as f64 {
            self.split_integral(x, d, true)
        } else {
            self.integral((x - d).max(self.lo), x)
        }
    }

    /// Inverse of [`primitive`](Self::primitive) by safeguarded Newton.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || s > self.total() * (1.0 + 1e-15) {
            return Err(Error::Domain(format!("{s} outside primitive range [0, {}]", self.total())));
        }
        let i = self.cum.partition_point(|&c| c <= s).saturating_sub(1).min(self.knots.len() - 2);
        let (mut a, mut b) = (self.knots[i], self.knots[i + 1]);
        if s == self.cum[i] {
            return Ok(a);
        }
        let mut x = b;
        for _ in 0..200 {
            let r = self.primitive(x)? - s;
            if r == 0.0 {
                return Ok(x);
            }
            if r > 0.0 {
                b = x;
            } else {
                a = x;
            }
            let gx = self.g(x);
            let mut nx = if gx > 0.0 { x - r / gx } else { f64::NAN };
            if !(nx > a && nx < b) {
                nx = 0.5 * (a + b);
            }
            let tiny = 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
            if (nx - x).abs() <= tiny || b - a <= tiny {
                return Ok(nx);
            }
            x = nx;
        }
        Ok(x)
    }

    /// `J(s) = g(G⁻¹(s))`.
    pub fn j(&self, s: f64) -> Result<f64> {
        Ok(self.g(self.inverse(s)?))
    }
}

/// Builds a kernel from either source over `[lo, hi]`.
pub fn build_kernel(src: impl Into<Source>, lo: f64, hi: f64, eps: f64) -> Result<RadialKernel> {
    RadialKernel::new(src, lo, hi, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_kernel() {
        let k = RadialKernel::from_density(&Density::constant(0.0), 5.0, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(k.primitive(3.0).unwrap(), 4.5, epsilon = 1e-13);
        assert_abs_diff_eq!(k.inverse(4.5).unwrap(), 3.0, epsilon = 10.0 * DEFAULT_EPS);
        assert_abs_diff_eq!(k.j(2.0).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_growth_kernel() {
        let d = Density::power(1.0, 2.0, 0.0).unwrap();
        let k = RadialKernel::from_density(&d, 2.0, DEFAULT_EPS).unwrap();
        // closed form G(t) = (e^{t^2} - 1)/2
        let closed = (1f64.exp() - 1.0) / 2.0;
        assert_abs_diff_eq!(k.primitive(1.0).unwrap(), closed, epsilon = 1e-13);
        for t in [0.1f64, 0.7, 1.3, 1.9] {
            let c = (t * t).exp_m1() / 2.0;
            assert!((k.primitive(t).unwrap() - c).abs() <= 1e-13 * c.max(1.0));
        }
    }

    #[test]
    fn round_trip_and_ode_residual() {
        let d = Density::piecewise_linear(&[(0.0, 0.0), (1.0, 0.5), (2.5, 1.5)], 0.2).unwrap();
        let k = RadialKernel::from_density(&d, 4.0, DEFAULT_EPS).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bps = k.breakpoints();
        let mut worst_rt: f64 = 0.0;
        let mut worst_ode: f64 = 0.0;
        let h = 1e-6;
        for _ in 0..1000 {
            let x: f64 = rng.random_range(0.01..3.99);
            worst_rt = worst_rt.max((k.inverse(k.primitive(x).unwrap()).unwrap() - x).abs());
            if bps.iter().any(|&b| (b - x).abs() < 2.0 * h) {
                continue;
            }
            let fd = (k.g(x + h) - k.g(x - h)) / (2.0 * h);
            let exact = k.dg(x, Side::Mean).unwrap();
            worst_ode = worst_ode.max((fd - exact).abs() / k.g(x));
        }
        assert!(worst_rt <= 10.0 * DEFAULT_EPS, "round trip {worst_rt}");
        assert!(worst_ode <= 100.0 * DEFAULT_EPS, "ode residual {worst_ode}");
    }

    #[test]
    fn increments_are_cancellation_free() {
        let rho = RhoFunction::step(1.0, 3.0, vec![2.0], vec![0.5, 2.0]).unwrap();
        let k = RadialKernel::from_rho(&rho, 0.0, DEFAULT_EPS).unwrap();
        let d = 1e-30;
        let inc = k.g_increment(1.0, d);
        let dec = k.g_decrement(3.0, d);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(rel(inc, d * k.dg(1.0, Side::Right).unwrap()) < 1e-12);
        assert!(rel(dec, d * k.dg(3.0, Side::Left).unwrap()) < 1e-12);
        assert!(rel(k.integral_fwd(1.0, d).unwrap(), d * k.g(1.0)) < 1e-12);
        assert!(rel(k.integral_back(3.0, d).unwrap(), d * k.g(3.0)) < 1e-12);
        let across = k.integral_fwd(1.9, 0.2).unwrap();
        assert!(rel(across, k.integral(1.9, 2.1).unwrap()) < 1e-13);
    }

    #[test]
    fn fractional_power_near_origin() {
        let d = Density::power(0.03, 1.055, -0.1).unwrap();
        let k = RadialKernel::from_density(&d, 2.0, DEFAULT_EPS).unwrap();
        let c = (-0.1f64).exp();
        for x in [1e-4f64, 0.01, 0.015, 1.3] {
            // h = -0.1 + 0.03 x^1.055 stays below 0.04, so e^h is close to its
            // first terms: x²/2 + 0.03 x^3.055/3.055 + ...
            let z = 0.03 * x.powf(1.055);
            let approx = c * x * x * (0.5 + z / 3.055 + z * z / 2.0 / 4.11 + z * z * z / 6.0 / 5.165);
            assert!((k.primitive(x).unwrap() / approx - 1.0).abs() < 1e-6, "{x}");
            assert_abs_diff_eq!(
                k.primitive(k.inverse(approx).unwrap()).unwrap(),
                approx,
                epsilon = 1e-15 * (1.0 + approx)
            );
        }
    }

    #[test]
    fn covering_grows_domain() {
        let k = RadialKernel::covering(&Density::constant(0.0), 1e4, DEFAULT_EPS).unwrap();
        assert!(k.total() >= 1e4);
        assert_abs_diff_eq!(k.inverse(50.0).unwrap(), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn rho_kernel_domain_must_fit() {
        let rho = RhoFunction::constant(1.0, 2.0, 1.0).unwrap();
        assert!(RadialKernel::new(rho, 0.5, 2.0, DEFAULT_EPS).is_err());
    }
}
