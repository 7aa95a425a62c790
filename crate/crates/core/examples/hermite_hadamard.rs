//! The four mean bounds for a few coefficients, with their margins. Only the
//! zero coefficient attains equality.

use isolab::means::verify_means;
use isolab::{RhoFunction, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let (a, b) = (1.0, 2.0);
    let cases = [
        ("zero", RhoFunction::constant(a, b, 0.0)?),
        ("constant 1", RhoFunction::constant(a, b, 1.0)?),
        ("affine 0.5 + t", RhoFunction::affine(a, b, 0.5, 1.0)?),
        ("step 0 | 2 at 1.5", RhoFunction::step(a, b, vec![1.5], vec![0.0, 2.0])?),
    ];
    println!(
        "{:<18} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "rho", "m", "m hat", "m - m0", "mh - mh0", "upper", "reverse"
    );
    for (name, rho) in &cases {
        let r = verify_means(rho, a, b, 1e-9, DEFAULT_EPS)?;
        println!(
            "{name:<18} {:>12.8} {:>12.8} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}  equality: {}",
            r.m,
            r.mhat,
            r.lower_margin,
            r.hat_lower_margin,
            r.upper_margin,
            r.reverse_margin,
            r.upper_equality || r.reverse_equality,
        );
    }
    // m for rho = 1 on [1, 2] is 2 - 1/e
    println!("2 - 1/e = {:.12}", 2.0 - (-1.0f64).exp());
    Ok(())
}
