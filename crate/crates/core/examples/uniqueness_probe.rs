//! A density flat on [0, 1]: below the plateau volume, off-center balls that
//! stay inside tie the centered ball, anything else loses.

use isolab::isoperimetry::uniqueness_probe;
use isolab::{Density, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let d = Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0)?;
    for v in [0.5, 1.5, 3.0, 6.0] {
        let r = uniqueness_probe(&d, v, DEFAULT_EPS)?;
        println!(
            "v = {v:<4} (plateau volume {:.6}) ball radius {:.6}, I_f = {:.10}",
            r.v0_weighted, r.ball_radius, r.ball_perimeter
        );
        for e in &r.entries {
            println!("    {:<11} at {:.4} radius {:.4}: gap {:+.3e}", e.kind.as_str(), e.position, e.radius, e.gap);
        }
        println!("    max tie {:.1e}, min loss {:.3e}", r.max_tie(), r.min_loss());
    }
    Ok(())
}
