//! Spherical cap symmetrization of a two-cap shape and an off-center ball:
//! volume is kept and perimeter does not grow.

use isolab::geometry::{kernel_for, symmetrize, CapProfile, Component, ShapeUnion};
use isolab::{Density, DEFAULT_EPS};

fn main() -> isolab::Result<()> {
    let d = Density::linear(0.5, 0.0)?;
    let shapes = [
        (
            "two caps",
            ShapeUnion::new(vec![
                Component::Cap(CapProfile::new(0.5, &[(1.0, 0.3), (2.0, 0.5)])?),
                Component::Cap(CapProfile::new(-2.0, &[(1.0, 0.2), (1.5, 0.2), (1.5, 0.4), (2.0, 0.4)])?),
            ])?,
        ),
        ("off-center ball", ShapeUnion::single(Component::OffCenterBall { cx: 1.5, cy: 0.0, r: 0.7 })?),
        (
            "half-disk",
            ShapeUnion::single(Component::Cap(CapProfile::new(
                0.0,
                &[(0.0, 0.5 * std::f64::consts::PI), (1.0, 0.5 * std::f64::consts::PI)],
            )?))?,
        ),
    ];
    for (name, s) in &shapes {
        let k = kernel_for(s, &d, DEFAULT_EPS)?;
        let out = symmetrize(s, &k)?;
        println!(
            "{name:<16} V {:.10} -> {:.10}   P {:.10} -> {:.10}   exact: {}  (interpolation error ~ {:.1e})",
            out.volume_before, out.volume_after, out.perimeter_before, out.perimeter_after, out.exact, out.volume_disc
        );
        for t in [0.9, 1.2, 1.8] {
            println!("    L({t}) after = {:.8}", out.profile.length(t));
        }
    }
    Ok(())
}
