//! The ratios `m = (g(b) - g(a)) / ∫g` and `m̂ = (g(a) + g(b)) / ∫g` with
//! their lower and upper bounds.

use crate::density::RhoFunction;
use crate::error::Result;
use crate::kernel::RadialKernel;

pub const DEFAULT_EQ_TOL: f64 = 1e-9;

/// `sup rho` at or below this counts as `rho ≡ 0`.
pub const ZERO_RHO: f64 = 1e-12;

fn kernel_on(rho: &RhoFunction, a: f64, b: f64, eps: f64) -> Result<RadialKernel> {
    RadialKernel::from_rho(&rho.restrict(a, b)?, 0.0, eps)
}

/// `m` from an existing kernel over `[a, b]`.
pub fn m_of(k: &RadialKernel) -> Result<f64> {
    let (a, b) = k.domain();
    Ok(k.g_increment(a, b - a) / k.total())
}

/// `m̂` from an existing kernel over `[a, b]`.
pub fn mhat_of(k: &RadialKernel) -> Result<f64> {
    let (a, b) = k.domain();
    Ok((k.g(a) + k.g(b)) / k.total())
}

pub fn compute_m(rho: &RhoFunction, a: f64, b: f64, eps: f64) -> Result<f64> {
    m_of(&kernel_on(rho, a, b, eps)?)
}

pub fn compute_mhat(rho: &RhoFunction, a: f64, b: f64, eps: f64) -> Result<f64> {
    mhat_of(&kernel_on(rho, a, b, eps)?)
}

/// Closed form of `m` for a constant coefficient `lambda`.
pub fn m_constant(lambda: f64, a: f64, b: f64) -> f64 {
    if lambda == 0.0 {
        return 2.0 / (a + b);
    }
    let (la, lb) = (lambda * a, lambda * b);
    let e = (la - lb).exp();
    lambda * (lb - la * e) / ((lb - 1.0) - (la - 1.0) * e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeansReport {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub mhat: f64,
    pub m0: f64,
    pub mhat0: f64,
    /// `rho(b-) + 2/(a+b)`.
    pub upper_bound: f64,
    /// `2 + a rho(a+) + b rho(b-)`.
    pub reverse_bound: f64,
    /// `m - m0`.
    pub lower_margin: f64,
    /// `m̂ - m̂0`.
    pub hat_lower_margin: f64,
    /// `upper_bound - m`.
    pub upper_margin: f64,
    /// `reverse_bound - (b - a) m̂`.
    pub reverse_margin: f64,
    pub upper_equality: bool,
    pub reverse_equality: bool,
    pub rho_zero: bool,
    pub sup_rho: f64,
    pub tol: f64,
}

impl MeansReport {
    /// All four inequalities hold up to `tol`.
    pub fn holds(&self) -> bool {
        [self.lower_margin, self.hat_lower_margin, self.upper_margin, self.reverse_margin]
            .iter()
            .all(|&m| m >= -self.tol)
    }

    /// Equality was flagged exactly when the coefficient vanishes.
    pub fn equality_consistent(&self) -> bool {
        let eq = self.upper_equality || self.reverse_equality;
        eq == self.rho_zero
    }

    pub fn min_margin(&self) -> f64 {
        self.lower_margin.min(self.hat_lower_margin).min(self.upper_margin).min(self.reverse_margin)
    }
}

/// Evaluates both means and the four bounds on `[a, b]`.
pub fn verify_means(rho: &RhoFunction, a: f64, b: f64, tol: f64, eps: f64) -> Result<MeansReport> {
    let r = rho.restrict(a, b)?;
    let k = RadialKernel::from_rho(&r, 0.0, eps)?;
    let m = m_of(&k)?;
    let mhat = mhat_of(&k)?;
    let m0 = 2.0 / (a + b);
    let mhat0 = 2.0 / (b - a);
    let upper_bound = r.at_end() + m0;
    let reverse_bound = 2.0 + a * r.at_start() + b * r.at_end();
    let upper_margin = upper_bound - m;
    let reverse_margin = reverse_bound - (b - a) * mhat;
    let sup_rho = r.sup();
    Ok(MeansReport {
        a,
        b,
        m,
        mhat,
        m0,
        mhat0,
        upper_bound,
        reverse_bound,
        lower_margin: m - m0,
        hat_lower_margin: mhat - mhat0,
        upper_margin,
        reverse_margin,
        upper_equality: upper_margin <= tol,
        reverse_equality: reverse_margin <= tol,
        rho_zero: sup_rho <= ZERO_RHO,
        sup_rho,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DEFAULT_EPS;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flat_values() {
        let r = RhoFunction::constant(1.0, 3.0, 0.0).unwrap();
        assert_abs_diff_eq!(compute_m(&r, 1.0, 3.0, DEFAULT_EPS).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(compute_mhat(&r, 1.0, 3.0, DEFAULT_EPS).unwrap(), 1.0, epsilon = 1e-14);
        let r = RhoFunction::constant(0.2, 7.5, 0.0).unwrap();
        assert_abs_diff_eq!(compute_mhat(&r, 0.2, 7.5, DEFAULT_EPS).unwrap(), 2.0 / 7.3, epsilon = 1e-14);
    }

    #[test]
    fn unit_slope_matches_closed_form() {
        let r = RhoFunction::constant(1.0, 2.0, 1.0).unwrap();
        let m = compute_m(&r, 1.0, 2.0, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(m, 2.0 - (-1f64).exp(), epsilon = 1e-13);
        assert_abs_diff_eq!(m_constant(1.0, 1.0, 2.0), 2.0 - (-1f64).exp(), epsilon = 1e-14);
        assert!(m < 1.0 + 2.0 / 3.0);
    }

    #[test]
    fn scale_covariance_for_constants() {
        for &(l, a, b) in &[(2.0, 1.0, 3.0), (0.3, 0.5, 4.0), (5.0, 0.1, 0.9)] {
            let lhs = m_constant(l, a, b);
            let rhs = l * m_constant(1.0, l * a, l * b);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12 * lhs);
            let r = RhoFunction::constant(a, b, l).unwrap();
            let q = compute_m(&r, a, b, DEFAULT_EPS).unwrap();
            assert_abs_diff_eq!(q, lhs, epsilon = 1e-12 * lhs);
        }
    }

    #[test]
    fn step_reverse_bound() {
        let r = RhoFunction::step(1.0, 3.0, vec![2.0], vec![0.0, 1.0]).unwrap();
        let mhat = compute_mhat(&r, 1.0, 3.0, DEFAULT_EPS).unwrap();
        assert!(2.0 * mhat < 5.0);
    }

    #[test]
    fn equality_only_for_zero() {
        let zero = RhoFunction::constant(1.0, 3.0, 0.0).unwrap();
        let rep = verify_means(&zero, 1.0, 3.0, DEFAULT_EQ_TOL, DEFAULT_EPS).unwrap();
        assert!(rep.holds() && rep.upper_equality && rep.reverse_equality && rep.rho_zero);
        let two = RhoFunction::constant(1.0, 3.0, 2.0).unwrap();
        let rep = verify_means(&two, 1.0, 3.0, DEFAULT_EQ_TOL, DEFAULT_EPS).unwrap();
        assert!(rep.holds() && !rep.upper_equality && rep.upper_margin > 0.0);
        assert!(rep.equality_consistent());
    }

    #[test]
    fn normalization_does_not_matter() {
        let r = RhoFunction::step(0.5, 4.0, vec![1.0, 3.0], vec![0.2, 0.9, 1.7]).unwrap();
        let k0 = RadialKernel::from_rho(&r, 0.0, DEFAULT_EPS).unwrap();
        let k1 = RadialKernel::from_rho(&r, 3.7, DEFAULT_EPS).unwrap();
        assert_abs_diff_eq!(m_of(&k0).unwrap(), m_of(&k1).unwrap(), epsilon = 10.0 * DEFAULT_EPS);
        assert_abs_diff_eq!(mhat_of(&k0).unwrap(), mhat_of(&k1).unwrap(), epsilon = 10.0 * DEFAULT_EPS);
    }

    #[test]
    fn origin_interval_is_allowed() {
        let r = RhoFunction::constant(0.0, 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(compute_m(&r, 0.0, 2.0, DEFAULT_EPS).unwrap(), 1.0, epsilon = 1e-14);
    }
}
