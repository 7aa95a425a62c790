//! Solves the linear problem for each pair of end signs, the Riccati problem
//! and the origin problem, and checks λ against shooting.

use isolab::bvp::shooting::{shoot_linear, shoot_origin, shoot_riccati};
use isolab::bvp::{residual_check, solve_linear, solve_origin, solve_riccati, Eta};
use isolab::{RhoFunction, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let (a, b) = (1.0, 3.0);
    let rho = RhoFunction::step(a, b, vec![2.0], vec![0.2, 0.7])?;
    for eta in Eta::ALL {
        let sol = solve_linear(&rho, a, b, eta, DEFAULT_EPS)?;
        let shot = shoot_linear(&rho, a, b, eta)?;
        println!(
            "linear {eta:>5}: lambda = {:>16.12}  shooting diff {:.1e}  residual {:.1e}  u(2) = {:.10}",
            sol.lambda,
            (sol.lambda - shot).abs(),
            residual_check(&sol, 200)?,
            sol.u(2.0)?
        );
    }
    let ric = solve_riccati(&rho, a, b, DEFAULT_EPS)?;
    println!(
        "riccati: lambda = {:.12}  shooting diff {:.1e}  sup w = {:.10}",
        ric.lambda,
        (ric.lambda - shoot_riccati(&rho, a, b)?).abs(),
        ric.sup_w
    );
    let small = RhoFunction::constant(0.0, b, 0.1)?;
    let origin = solve_origin(&small, b, DEFAULT_EPS)?;
    println!(
        "origin:  lambda = {:.12}  shooting diff {:.1e}  u(1) = {:.10} >= 1/3",
        origin.lambda,
        (origin.lambda - shoot_origin(&small, b)?).abs(),
        origin.u(1.0)?
    );
    Ok(())
}
