//! Independent check on the multiplier: integrate the ODE numerically
//! (Dormand–Prince 5(4)) and solve for the value that meets the boundary data.

use crate::density::{RhoFunction, Side};
use crate::error::{Error, Result};
use crate::quad::bracket_root;

use super::Eta;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Adaptive Dormand–Prince integration of `y' = f(t, y)` from `t0` to `t1`.
pub fn dopri5<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    rtol: f64,
    atol: f64,
) -> Result<[f64; N]> {
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = span / 64.0;
    let mut steps = 0usize;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [[0.0; N]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..N {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            let ts = if s >= 5 { t + h } else { t + C[s] * h };
            k[s] = f(ts, &ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for i in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (d5 - d4)).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Domain(format!("ODE solution blew up near t = {t}")));
        }
        if err <= 1.0 {
            t = if t + h >= t1 { t1 } else { t + h };
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        steps += 1;
        if steps > 2_000_000 || h.abs() < 1e-15 * span.abs() {
            return Err(Error::Domain("ODE step size underflow".into()));
        }
    }
    Ok(y)
}

/// Integrates across the smooth panels of `rho`, choosing the one-sided
/// value of `rho` at panel ends.
fn across_panels<const N: usize, F: Fn(f64, f64, &[f64; N]) -> [f64; N]>(
    rho: &RhoFunction,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    f: F,
) -> Result<[f64; N]> {
    let mut cuts = vec![t0];
    cuts.extend(rho.breakpoints(t0, t1));
    cuts.push(t1);
    let mut y = y0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        y = dopri5(
            |t, y| {
                let side = if t <= lo {
                    Side::Right
                } else if t >= hi {
                    Side::Left
                } else {
                    Side::Mean
                };
                let r = rho.rho(t.clamp(lo, hi), side).unwrap_or(f64::NAN);
                f(t, r, y)
            },
            lo,
            hi,
            y,
            1e-12,
            1e-14,
        )?;
    }
    Ok(y)
}

/// Multiplier of the linear problem by superposition of two shots.
pub fn shoot_linear(rho: &RhoFunction, a: f64, b: f64, eta: Eta) -> Result<f64> {
    let y = across_panels(rho, a, b, [eta.first as f64, 0.0], |t, r, y| {
        let c = 1.0 / t + r;
        [-c * y[0], -c * y[1] - 1.0]
    })?;
    Ok((eta.second as f64 - y[0]) / y[1])
}

/// Multiplier of the origin problem; the regular singular point at 0 is
/// stepped over with the leading series term.
pub fn shoot_origin(rho: &RhoFunction, b: f64) -> Result<f64> {
    let x0 = 1e-8 * b;
    let y = across_panels(rho, x0, b, [-0.5 * x0], |t, r, y| [-(1.0 / t + r) * y[0] - 1.0])?;
    Ok(1.0 / y[0])
}

/// Multiplier of the Riccati problem by root finding on the end value.
pub fn shoot_riccati(rho: &RhoFunction, a: f64, b: f64) -> Result<f64> {
    let end = |lam: f64| -> f64 {
        across_panels(rho, a, b, [1.0], |t, r, y| [(1.0 / t + r) * y[0] - lam * y[0] * y[0]])
            .map(|y| y[0] - 1.0)
            .unwrap_or(f64::NAN)
    };
    let lo = 2.0 / (a + b) * 0.5;
    let mut hi = rho.at_end() + 2.0 / (a + b);
    let mut tries = 0;
    while end(hi) > 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Domain("could not bracket the Riccati multiplier".into()));
        }
    }
    bracket_root(end, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exponential_decay() {
        let y = dopri5(|_, y: &[f64; 1]| [-y[0]], 0.0, 2.0, [1.0], 1e-12, 1e-14).unwrap();
        assert_abs_diff_eq!(y[0], (-2f64).exp(), epsilon = 1e-11);
    }

    #[test]
    fn flat_multipliers() {
        let r = RhoFunction::constant(0.0, 3.0, 0.0).unwrap();
        let sub = r.restrict(1.0, 3.0).unwrap();
        assert_abs_diff_eq!(shoot_linear(&sub, 1.0, 3.0, Eta::PP).unwrap(), -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(shoot_linear(&sub, 1.0, 3.0, Eta::PM).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(shoot_riccati(&sub, 1.0, 3.0).unwrap(), 0.5, epsilon = 1e-9);
        let o = RhoFunction::constant(0.0, 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(shoot_origin(&o, 2.0).unwrap(), -1.0, epsilon = 1e-9);
    }
}
