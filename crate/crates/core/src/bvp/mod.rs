//! First-order boundary-value problems with a nondecreasing coefficient,
//! solved in closed form by quadrature.
//!
//! Every solution is written as `u = s · P / g` with `P(t) = k ∫_a^t g + P(a)`,
//! which lets `1 ± u` be evaluated from offsets near either end.

pub mod shooting;

use std::fmt;
use std::str::FromStr;

use crate::density::{RhoFunction, Side};
use crate::error::{Error, Result};
use crate::kernel::RadialKernel;
use crate::means::{m_of, mhat_of};
use crate::quad::golden_max;

/// Boundary signs `(u(a), u(b))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Eta {
    pub first: i8,
    pub second: i8,
}

impl Eta {
    pub const PP: Eta = Eta { first: 1, second: 1 };
    pub const PM: Eta = Eta { first: 1, second: -1 };
    pub const MP: Eta = Eta { first: -1, second: 1 };
    pub const MM: Eta = Eta { first: -1, second: -1 };
    pub const ALL: [Eta; 4] = [Eta::PP, Eta::PM, Eta::MP, Eta::MM];

    pub fn new(first: i8, second: i8) -> Result<Self> {
        if first.abs() != 1 || second.abs() != 1 {
            return Err(Error::Input(format!("eta entries must be +1 or -1, got ({first}, {second})")));
        }
        Ok(Self { first, second })
    }

    pub fn same_sign(&self) -> bool {
        self.first == self.second
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.first, self.second)
    }
}

impl FromStr for Eta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<_> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Input(format!("eta must look like '1,-1', got '{s}'")));
        }
        let p = |x: &str| x.parse::<i8>().map_err(|_| Error::Input(format!("eta entry '{x}' is not an integer")));
        Eta::new(p(parts[0])?, p(parts[1])?)
    }
}

/// Where to evaluate: an offset from either end, or a plain abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum At {
    FromLo(f64),
    FromHi(f64),
    X(f64),
}

#[derive(Debug, Clone)]
struct ClosedForm {
    kernel: RadialKernel,
    a: f64,
    b: f64,
    k: f64,
    p_lo: f64,
    p_hi: f64,
    sign: f64,
}

impl ClosedForm {
    fn p(&self, t: f64) -> Result<f64> {
        Ok(self.k * self.kernel.primitive(t)? + self.p_lo)
    }

    fn u(&self, t: f64) -> Result<f64> {
        if t == self.a {
            return Ok(self.sign * self.p_lo_over_g());
        }
        if t == self.b {
            return Ok(self.sign * self.p_hi / self.kernel.g(self.b));
        }
        Ok(self.sign * self.p(t)? / self.kernel.g(t))
    }

    fn p_lo_over_g(&self) -> f64 {
        let ga = self.kernel.g(self.a);
        if ga == 0.0 {
            0.0
        } else {
            self.p_lo / ga
        }
    }

    fn du(&self, t: f64, side: Side) -> Result<f64> {
        let u = self.u(t)?;
        Ok(self.sign * self.k - (1.0 / t + self.kernel.rho(t, side)?) * u)
    }

    fn resolve(&self, at: At) -> At {
        match at {
            At::X(x) => {
                // g increases, so the far end costs digits once g(b) >> g(x)
                if x - self.a <= self.b - x || self.kernel.g(x) < 0.5 * self.kernel.g(self.b) {
                    At::FromLo(x - self.a)
                } else {
                    At::FromHi(self.b - x)
                }
            }
            other => other,
        }
    }

    /// `1 - σ u` evaluated from the end nearest to the point.
    fn one_minus(&self, sigma: f64, at: At) -> Result<f64> {
        let s = sigma * self.sign;
        let kern = &self.kernel;
        match self.resolve(at) {
            At::FromLo(d) => {
                let ga = kern.g(self.a);
                let dg = kern.g_increment(self.a, d);
                let num = (ga - s * self.p_lo) + dg - s * self.k * kern.integral_fwd(self.a, d)?;
                Ok(num / (ga + dg))
            }
            At::FromHi(d) => {
                let gb = kern.g(self.b);
                let dg = kern.g_decrement(self.b, d);
                let num = (gb - s * self.p_hi) - dg + s * self.k * kern.integral_back(self.b, d)?;
                Ok(num / (gb - dg))
            }
            At::X(_) => unreachable!(),
        }
    }

    fn x_of(&self, at: At) -> f64 {
        match at {
            At::FromLo(d) => self.a + d,
            At::FromHi(d) => self.b - d,
            At::X(x) => x,
        }
    }
}

/// Solution `(u, λ)` of `u' + (1/x + rho) u + λ = 0` with prescribed end values.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub a: f64,
    pub b: f64,
    /// `None` for the problem anchored at the origin (`u(0) = 0`, `u(b) = 1`).
    pub eta: Option<Eta>,
    pub lambda: f64,
    /// The unique zero of `u` for opposite boundary signs.
    pub zero: Option<f64>,
    pub boundary_error: f64,
    form: ClosedForm,
}

impl BvpSolution {
    pub fn u(&self, t: f64) -> Result<f64> {
        self.form.u(t)
    }

    pub fn du(&self, t: f64, side: Side) -> Result<f64> {
        self.form.du(t, side)
    }

    /// `1 - σ u`, accurate where `u` approaches `σ`.
    pub fn one_minus(&self, sigma: f64, at: At) -> Result<f64> {
        self.form.one_minus(sigma, at)
    }

    pub fn x_of(&self, at: At) -> f64 {
        self.form.x_of(at)
    }

    pub fn kernel(&self) -> &RadialKernel {
        &self.form.kernel
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.form.kernel.breakpoints()
    }

    pub fn residual(&self, n_points: usize) -> Result<f64> {
        residual_check(self, n_points)
    }
}

/// Solution `(w, λ)` of `w' + λ w² = (1/x + rho) w`, `w(a) = w(b) = 1`.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub sup_w: f64,
    pub argmax: f64,
    pub boundary_error: f64,
    linear: BvpSolution,
}

impl RiccatiSolution {
    pub fn w(&self, t: f64) -> Result<f64> {
        Ok(1.0 / self.linear.u(t)?)
    }

    pub fn dw(&self, t: f64, side: Side) -> Result<f64> {
        let w = self.w(t)?;
        Ok((1.0 / t + self.linear.kernel().rho(t, side)?) * w - self.lambda * w * w)
    }

    /// `w - 1`, accurate near the ends where `w` returns to 1.
    pub fn w_minus_one(&self, at: At) -> Result<f64> {
        let d = self.linear.one_minus(1.0, at)?;
        let u = 1.0 - d;
        Ok(d / u)
    }

    /// The `η = (1, 1)` linear solution; `w = 1/u`.
    pub fn reciprocal(&self) -> &BvpSolution {
        &self.linear
    }

    pub fn kernel(&self) -> &RadialKernel {
        self.linear.kernel()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.linear.breakpoints()
    }

    pub fn x_of(&self, at: At) -> f64 {
        self.linear.x_of(at)
    }

    pub fn residual(&self, n_points: usize) -> Result<f64> {
        residual_check(self, n_points)
    }

    /// Slopes at the two ends, `(w'(a+), w'(b-))`.
    pub fn end_slopes(&self) -> Result<(f64, f64)> {
        Ok((self.dw(self.a, Side::Right)?, self.dw(self.b, Side::Left)?))
    }
}

fn check_interval(rho: &RhoFunction, a: f64, b: f64) -> Result<RhoFunction> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    rho.restrict(a, b)
}

/// Closed-form solution of the linear problem for boundary signs `eta`.
pub fn solve_linear(rho: &RhoFunction, a: f64, b: f64, eta: Eta, eps: f64) -> Result<BvpSolution> {
    if a <= 0.0 {
        return Err(Error::Domain("linear problem needs a > 0; use solve_origin".into()));
    }
    let r = check_interval(rho, a, b)?;
    let kernel = RadialKernel::from_rho(&r, 0.0, eps)?;
    let k = if eta.same_sign() { m_of(&kernel)? } else { -mhat_of(&kernel)? };
    let sign = eta.first as f64;
    let (ga, gb) = (kernel.g(a), kernel.g(b));
    let p_hi = (eta.first * eta.second) as f64 * gb;
    let zero = if eta.same_sign() { None } else { Some(kernel.inverse(ga / -k)?) };
    let form = ClosedForm { kernel, a, b, k, p_lo: ga, p_hi, sign };
    let computed_end = sign * form.p(b)? / gb;
    Ok(BvpSolution {
        a,
        b,
        eta: Some(eta),
        lambda: -sign * k,
        zero,
        boundary_error: (computed_end - eta.second as f64).abs(),
        form,
    })
}

/// Closed-form solution of the Riccati problem.
pub fn solve_riccati(rho: &RhoFunction, a: f64, b: f64, eps: f64) -> Result<RiccatiSolution> {
    let linear = solve_linear(rho, a, b, Eta::PP, eps)?;
    let lambda = -linear.lambda;
    let mut sol =
        RiccatiSolution { a, b, lambda, sup_w: 1.0, argmax: a, boundary_error: linear.boundary_error, linear };
    let (x, v) = locate_max(&sol.linear, |t| sol.w(t).unwrap_or(f64::NAN))?;
    sol.sup_w = v;
    sol.argmax = x;
    Ok(sol)
}

/// Solution of the problem anchored at the origin, `u(0) = 0`, `u(b) = 1`.
pub fn solve_origin(rho: &RhoFunction, b: f64, eps: f64) -> Result<BvpSolution> {
    if rho.a() != 0.0 {
        return Err(Error::Domain("origin problem needs a coefficient on [0, b]".into()));
    }
    let r = check_interval(rho, 0.0, b)?;
    let kernel = RadialKernel::from_rho(&r, 0.0, eps)?;
    let gb = kernel.g(b);
    let c = gb / kernel.total();
    let form = ClosedForm { kernel, a: 0.0, b, k: c, p_lo: 0.0, p_hi: gb, sign: 1.0 };
    let computed_end = form.p(b)? / gb;
    Ok(BvpSolution { a: 0.0, b, eta: None, lambda: -c, zero: None, boundary_error: (computed_end - 1.0).abs(), form })
}

/// Scans every smooth panel on a fine grid, refines around the best sample,
/// and returns `(argmax, max)`.
fn locate_max<F: Fn(f64) -> f64>(sol: &BvpSolution, f: F) -> Result<(f64, f64)> {
    let mut cuts = vec![sol.a];
    cuts.extend(sol.breakpoints());
    cuts.push(sol.b);
    let mut best = (sol.a, f(sol.a));
    for w in cuts.windows(2) {
        let n = 256;
        let xs: Vec<f64> = (0..=n).map(|i| w[0] + (w[1] - w[0]) * i as f64 / n as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        for i in 0..=n {
            if vals[i] > best.1 {
                best = (xs[i], vals[i]);
            }
            if i > 0 && i < n && vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
                let cand = golden_max(&f, xs[i - 1], xs[i + 1]);
                if cand.1 > best.1 {
                    best = cand;
                }
            }
        }
    }
    if best.1.is_nan() {
        return Err(Error::Domain("maximum search hit NaN".into()));
    }
    Ok(best)
}

/// Anything with a defining first-order ODE that can be spot-checked.
pub trait OdeSolution {
    fn interval(&self) -> (f64, f64);
    fn breakpoints(&self) -> Vec<f64>;
    fn value(&self, t: f64) -> Result<f64>;
    /// Residual of the defining ODE given the value and a derivative estimate.
    fn residual_at(&self, t: f64, value: f64, derivative: f64) -> Result<f64>;
}

impl OdeSolution for BvpSolution {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn breakpoints(&self) -> Vec<f64> {
        BvpSolution::breakpoints(self)
    }
    fn value(&self, t: f64) -> Result<f64> {
        self.u(t)
    }
    fn residual_at(&self, t: f64, u: f64, du: f64) -> Result<f64> {
        Ok(du + (1.0 / t + self.kernel().rho(t, Side::Mean)?) * u + self.lambda)
    }
}

impl OdeSolution for RiccatiSolution {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn breakpoints(&self) -> Vec<f64> {
        RiccatiSolution::breakpoints(self)
    }
    fn value(&self, t: f64) -> Result<f64> {
        self.w(t)
    }
    fn residual_at(&self, t: f64, w: f64, dw: f64) -> Result<f64> {
        Ok(dw + self.lambda * w * w - (1.0 / t + self.kernel().rho(t, Side::Mean)?) * w)
    }
}

/// Step of the finite-difference stencil.
pub const FD_STEP: f64 = 1e-5;

/// Fourth-order central difference of `sol` at `t`.
pub fn fd_derivative<S: OdeSolution + ?Sized>(sol: &S, t: f64, h: f64) -> Result<f64> {
    let v = |x: f64| sol.value(x);
    Ok((8.0 * (v(t + h)? - v(t - h)?) - (v(t + 2.0 * h)? - v(t - 2.0 * h)?)) / (12.0 * h))
}

/// Sample points strictly inside smooth panels, at least `margin` away from
/// every breakpoint and end.
pub fn interior_points(a: f64, b: f64, bps: &[f64], n: usize, margin: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| a + (b - a) * i as f64 / (n + 1) as f64)
        .filter(|&t| t - a > margin && b - t > margin && bps.iter().all(|&p| (p - t).abs() > margin))
        .collect()
}

/// Worst absolute residual of the defining ODE at `n_points` interior
/// continuity points, using finite differences.
pub fn residual_check<S: OdeSolution + ?Sized>(sol: &S, n_points: usize) -> Result<f64> {
    if n_points < 2 {
        return Err(Error::Input("residual check needs at least 2 points".into()));
    }
    let (a, b) = sol.interval();
    let bps = sol.breakpoints();
    let mut worst: f64 = 0.0;
    for t in interior_points(a, b, &bps, n_points, 3.0 * FD_STEP) {
        let d = fd_derivative(sol, t, FD_STEP)?;
        let r = sol.residual_at(t, sol.value(t)?, d)?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DEFAULT_EPS;
    use approx::assert_abs_diff_eq;

    fn flat(a: f64, b: f64) -> RhoFunction {
        RhoFunction::constant(a, b, 0.0).unwrap()
    }

    #[test]
    fn flat_same_signs() {
        let s = solve_linear(&flat(1.0, 3.0), 1.0, 3.0, Eta::PP, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(s.lambda, -0.5, epsilon = 1e-14);
        for t in [1.0, 1.4, 3f64.sqrt(), 2.6, 3.0] {
            assert_abs_diff_eq!(s.u(t).unwrap(), (t * t + 3.0) / (4.0 * t), epsilon = 1e-14);
        }
        assert!(s.residual(200).unwrap() <= 1e-8);
    }

    #[test]
    fn flat_opposite_signs() {
        let s = solve_linear(&flat(1.0, 3.0), 1.0, 3.0, Eta::PM, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(s.lambda, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.zero.unwrap(), 3f64.sqrt(), epsilon = 1e-13);
        for t in [1.2, 2.0, 2.9] {
            assert_abs_diff_eq!(s.u(t).unwrap(), (3.0 - t * t) / (2.0 * t), epsilon = 1e-14);
        }
        // 1 + u at b - d is d (1 + 3/b^2)/2 to first order
        let d = 1e-20;
        let v = s.one_minus(-1.0, At::FromHi(d)).unwrap();
        assert!((v / (d * (1.0 + 3.0 / 9.0) / 2.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sign_patterns_and_boundaries() {
        let r = RhoFunction::step(0.5, 4.0, vec![1.5, 2.5], vec![0.3, 0.8, 2.0]).unwrap();
        let pp = solve_linear(&r, 0.5, 4.0, Eta::PP, DEFAULT_EPS).unwrap();
        let mm = solve_linear(&r, 0.5, 4.0, Eta::MM, DEFAULT_EPS).unwrap();
        let pm = solve_linear(&r, 0.5, 4.0, Eta::PM, DEFAULT_EPS).unwrap();
        let mp = solve_linear(&r, 0.5, 4.0, Eta::MP, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(pp.lambda, -mm.lambda, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.lambda, -mp.lambda, epsilon = 1e-15);
        for s in [&pp, &mm, &pm, &mp] {
            let e = s.eta.unwrap();
            assert_abs_diff_eq!(s.u(0.5).unwrap(), e.first as f64, epsilon = 10.0 * DEFAULT_EPS);
            assert!(s.boundary_error <= 10.0 * DEFAULT_EPS);
            assert!(s.residual(300).unwrap() <= 1e-7);
            let shot = shooting::shoot_linear(&r, 0.5, 4.0, e).unwrap();
            assert_abs_diff_eq!(shot, s.lambda, epsilon = 1e-7);
        }
        // positivity and the decrease on {u >= 0}
        let mut t = 0.5;
        while t <= 4.0 {
            assert!(pp.u(t).unwrap() > 0.0);
            if pm.u(t).unwrap() >= 0.0 && t < 4.0 {
                assert!(pm.du(t, Side::Right).unwrap() <= -pm.lambda + 1e-9);
            }
            t += 0.01;
        }
        let c = pm.zero.unwrap();
        assert!(pm.u(c).unwrap().abs() < 1e-12);
    }

    #[test]
    fn flat_riccati() {
        let s = solve_riccati(&flat(1.0, 3.0), 1.0, 3.0, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(s.lambda, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.w(1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.w(3.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.w(2.0).unwrap(), 8.0 / 7.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.sup_w, 2.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.argmax, 3f64.sqrt(), epsilon = 1e-7);
        assert!(s.residual(200).unwrap() <= 1e-8);
        let u = s.reciprocal();
        for t in [1.1, 2.2, 2.9] {
            assert_abs_diff_eq!(u.u(t).unwrap() * s.w(t).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn origin_problem() {
        let s = solve_origin(&flat(0.0, 2.0), 2.0, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(s.lambda, -1.0, epsilon = 1e-14);
        for t in [0.0, 0.3, 1.0, 2.0] {
            assert_abs_diff_eq!(s.u(t).unwrap(), t / 2.0, epsilon = 1e-14);
        }
        let r = RhoFunction::step(0.0, 2.0, vec![1.0], vec![0.0, 2.0]).unwrap();
        let s = solve_origin(&r, 2.0, DEFAULT_EPS).unwrap();
        assert!(s.u(1.0).unwrap() > 0.5);
        let mut t: f64 = 0.0;
        while t <= 2.0 {
            assert!(s.u(t).unwrap() >= t / 2.0 - 1e-14);
            t += 0.01;
        }
        assert!(s.residual(200).unwrap() <= 1e-7);
        let shot = shooting::shoot_origin(&r, 2.0).unwrap();
        assert_abs_diff_eq!(shot, s.lambda, epsilon = 1e-7);
    }

    #[test]
    fn perturbation_is_detected() {
        struct Shifted(BvpSolution);
        impl OdeSolution for Shifted {
            fn interval(&self) -> (f64, f64) {
                self.0.interval()
            }
            fn breakpoints(&self) -> Vec<f64> {
                self.0.breakpoints()
            }
            fn value(&self, t: f64) -> Result<f64> {
                Ok(self.0.u(t)? + 0.01)
            }
            fn residual_at(&self, t: f64, u: f64, du: f64) -> Result<f64> {
                self.0.residual_at(t, u, du)
            }
        }
        let s = solve_linear(&flat(1.0, 3.0), 1.0, 3.0, Eta::PP, DEFAULT_EPS).unwrap();
        assert!(residual_check(&Shifted(s), 50).unwrap() > 1e-3);
    }

    #[test]
    fn riccati_shooting_agrees() {
        let r = RhoFunction::step(1.0, 3.0, vec![2.0], vec![0.0, 0.4]).unwrap();
        let s = solve_riccati(&r, 1.0, 3.0, DEFAULT_EPS).unwrap();
        let shot = shooting::shoot_riccati(&r, 1.0, 3.0).unwrap();
        assert_abs_diff_eq!(shot, s.lambda, epsilon = 1e-7);
        assert!(s.residual(200).unwrap() <= 1e-7);
    }

    #[test]
    fn eta_parsing() {
        assert_eq!("1,-1".parse::<Eta>().unwrap(), Eta::PM);
        assert!("1,0".parse::<Eta>().is_err());
        assert!("1".parse::<Eta>().is_err());
    }
}
