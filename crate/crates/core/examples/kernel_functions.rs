//! The kernel functions g(t) = t e^{h(t)}, G = ∫g and J = g∘G⁻¹ for a few
//! densities, next to the ball profile I_f(v) = 2π J(v/2π).

use isolab::isoperimetry::profile_value_for;
use isolab::{Density, RadialKernel, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let densities = [
        ("flat", Density::constant(0.0)),
        ("h = t", Density::linear(1.0, 0.0)?),
        ("h = t^2", Density::power(1.0, 2.0, 0.0)?),
        ("plateau to 1, then slope 1", Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0)?),
    ];
    for (name, d) in &densities {
        let k = RadialKernel::from_density(d, 3.0, DEFAULT_EPS)?;
        println!("{name}");
        println!("  {:>5} {:>14} {:>14} {:>14}", "t", "g(t)", "G(t)", "J(G(t))");
        for t in [0.5, 1.0, 2.0, 3.0] {
            let s = k.primitive(t)?;
            println!("  {t:>5} {:>14.8} {:>14.8} {:>14.8}", k.g(t), s, k.j(s)?);
        }
        for v in [1.0, 10.0] {
            let p = profile_value_for(d, v, DEFAULT_EPS)?;
            println!("  v = {v:<4} ball radius {:.8}, I_f(v) = {:.10}", p.r, p.perimeter);
        }
    }
    Ok(())
}
