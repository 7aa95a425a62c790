//! Unions of one to three centered annuli against the centered ball of the
//! same weighted volume.

use isolab::isoperimetry::{compete, superadditivity_check, CompeteOptions};
use isolab::random::DEFAULT_SEED;
use isolab::{Density, RadialKernel, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let d = Density::power(1.0, 2.0, 0.0)?;
    for v in [0.5, 5.0, 40.0] {
        for n in 1..=3 {
            let r =
                compete(&d, v, CompeteOptions { n, trials: 16, seed: DEFAULT_SEED, eps: DEFAULT_EPS, trace: false })?;
            println!(
                "v = {v:<5} N = {n}: I_f = {:.10}  best = {:.10}  gap = {:.3e}  superadditive: {}",
                r.ball_perimeter, r.best_perimeter, r.gap, r.superadditivity_holds
            );
        }
    }
    let k = RadialKernel::from_density(&d, 4.0, DEFAULT_EPS)?;
    let t = [k.primitive(2.0)?, k.primitive(1.5)?, k.primitive(1.0)?];
    let s = superadditivity_check(&k, &t)?;
    println!("J(t1) + J(t2) + J(t3) = {:.10} >= J(t1 - t2 + t3) = {:.10}", s.lhs, s.rhs);
    Ok(())
}
