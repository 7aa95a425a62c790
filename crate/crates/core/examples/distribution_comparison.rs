//! Distribution functions of the Riccati solution against the flat one, and
//! the singular integrals that follow from the comparison.

use isolab::dist::{compare_linear, compare_riccati, weighted_integral, Weight};
use isolab::{RhoFunction, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let (a, b) = (0.5, 4.0);
    let rho = RhoFunction::step(a, b, vec![1.0, 2.5], vec![0.0, 0.1, 0.3])?;

    let lin = compare_linear(&rho, a, b, 1e-6, DEFAULT_EPS)?;
    println!(
        "linear: max(mu_u - mu_-u) = {:.3e}, strict window {:?}",
        lin.report.max_violation, lin.report.strict_window
    );
    let odd = weighted_integral(Weight::OddIncreasing(0.5), &lin.solution, 1e-10)?;
    println!("linear: int u/sqrt(1-u^2) dmu = {odd:.10} (<= 0)");

    let ric = compare_riccati(&rho, a, b, 1e-6, 1e-4, DEFAULT_EPS)?;
    println!("riccati: sup w = {:.10}, flat sup = {:.10}", ric.sup_w, ric.sup_w0);
    println!("{:>14} {:>14} {:>14}", "t", "mu_w(t)", "z0(t)");
    let n = ric.level.thresholds.len();
    for i in (0..n).step_by(n / 8) {
        println!("{:>14.8} {:>14.8} {:>14.8}", ric.level.thresholds[i], ric.level.lhs[i], ric.level.rhs[i]);
    }
    println!(
        "riccati: order margin {:.3e}, slope cells skipped {} of {}",
        ric.level.max_violation,
        ric.slope.skipped_count(),
        ric.slope.thresholds.len()
    );
    let sing = weighted_integral(Weight::DecreasingSingular(0.5), &ric.solution, 1e-10)?;
    println!("riccati: int dmu/sqrt(w^2-1) = {sing:.10} (>= pi = {:.10})", std::f64::consts::PI);
    Ok(())
}
