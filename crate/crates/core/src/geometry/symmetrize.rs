use std::f64::consts::PI;

use super::{
    cap_perimeter, component_volume, weighted_perimeter, weighted_volume, CapProfile, Component, Limit, ShapeUnion,
};
use crate::error::{Error, Result};
use crate::kernel::RadialKernel;

/// Nodes used to sample each off-center ball's section lengths.
const BALL_NODES: usize = 2048;

#[derive(Debug, Clone)]
pub struct Symmetrized {
    pub profile: CapProfile,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    pub volume_before: f64,
    pub volume_after: f64,
    /// True when every section length was represented exactly.
    pub exact: bool,
    /// Interpolation error estimates for `volume_after` and `perimeter_after`;
    /// zero when `exact` and for raster symmetrals, which are not estimated.
    pub volume_disc: f64,
    pub perimeter_disc: f64,
}

/// Spherical cap symmetral of a shape: each circle `|x| = τ` meets the result
/// in one arc centered on the positive axis, of the same length.
///
/// Off-center balls are sampled; their error is estimated by repeating the
/// construction with half the nodes (the error is quadratic in the spacing).
pub fn symmetrize(s: &ShapeUnion, k: &RadialKernel) -> Result<Symmetrized> {
    let mut out = symmetrize_with(s, k, BALL_NODES)?;
    if !out.exact {
        let coarse = symmetrize_with(s, k, BALL_NODES / 2)?;
        // Richardson: fine error ≈ |fine - coarse| / 3, doubled for safety
        out.volume_disc = 2.0 * (out.volume_after - coarse.volume_after).abs() / 3.0;
        out.perimeter_disc = 2.0 * (out.perimeter_after - coarse.perimeter_after).abs() / 3.0;
    }
    Ok(out)
}

fn symmetrize_with(s: &ShapeUnion, k: &RadialKernel, ball_nodes: usize) -> Result<Symmetrized> {
    let mut knots = Vec::new();
    let mut exact = true;
    for c in &s.components {
        match c {
            Component::CenteredBall { r } => knots.extend([0.0, *r]),
            Component::Annulus { inner, outer } => knots.extend([*inner, *outer]),
            Component::Cap(p) => knots.extend(p.knots()),
            Component::OffCenterBall { cx, cy, r } => {
                exact = false;
                let (lo, hi) = ((cx.hypot(*cy) - r).abs(), cx.hypot(*cy) + r);
                if r > &cx.hypot(*cy) {
                    knots.push(r - cx.hypot(*cy));
                }
                // cluster toward both ends, where the section length has
                // square-root behavior
                knots.extend((0..=ball_nodes).map(|i| {
                    let q = 0.5 * (1.0 - (PI * i as f64 / ball_nodes as f64).cos());
                    lo + (hi - lo) * q
                }));
            }
        }
    }
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let total =
        |t: f64, limit: Limit| -> f64 { s.components.iter().filter_map(|c| c.arc_at(t, limit)).map(|a| a.1).sum() };
    let mut nodes = Vec::with_capacity(knots.len() + 8);
    for &t in &knots {
        let (below, above) = (total(t, Limit::Below), total(t, Limit::Above));
        for v in [below, above] {
            if v > PI * (1.0 + 1e-12) {
                return Err(Error::Shape(format!("sections overlap at radius {t}")));
            }
        }
        let (below, above) = (below.min(PI), above.min(PI));
        if below == above {
            nodes.push((t, below));
        } else {
            nodes.push((t, below));
            nodes.push((t, above));
        }
    }
    // drop empty stretches at both ends
    while nodes.len() > 2 && nodes[0].1 == 0.0 && nodes[1].1 == 0.0 {
        nodes.remove(0);
    }
    while nodes.len() > 2 && nodes[nodes.len() - 1].1 == 0.0 && nodes[nodes.len() - 2].1 == 0.0 {
        nodes.pop();
    }
    let profile = CapProfile::new(0.0, &nodes)?;
    let after = Component::Cap(profile.clone());
    Ok(Symmetrized {
        perimeter_before: weighted_perimeter(s, k)?,
        perimeter_after: cap_perimeter(&profile, k)?,
        volume_before: weighted_volume(s, k)?,
        volume_after: component_volume(&after, k)?,
        profile,
        exact,
        volume_disc: 0.0,
        perimeter_disc: 0.0,
    })
}

/// Square occupancy grid over `[-extent, extent]²`, by cell centers.
#[derive(Debug, Clone)]
pub struct Raster {
    pub extent: f64,
    pub n: usize,
    cells: Vec<bool>,
}

impl Raster {
    pub fn from_shape(s: &ShapeUnion, extent: f64, n: usize) -> Self {
        let h = 2.0 * extent / n as f64;
        let mut cells = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (-extent + (i as f64 + 0.5) * h, -extent + (j as f64 + 0.5) * h);
                cells.push(s.contains(x, y));
            }
        }
        Self { extent, n, cells }
    }

    pub fn cell(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.n + i]
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.extent / self.n as f64
    }

    fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let h = self.cell_size();
        (-self.extent + (i as f64 + 0.5) * h, -self.extent + (j as f64 + 0.5) * h)
    }

    /// Weighted cell area.
    pub fn volume(&self, k: &RadialKernel) -> f64 {
        let h = self.cell_size();
        let mut sum = 0.0;
        for j in 0..self.n {
            for i in 0..self.n {
                if self.cell(i, j) {
                    let (x, y) = self.center(i, j);
                    sum += k.f(x.hypot(y)) * h * h;
                }
            }
        }
        sum
    }

    /// Weighted length of the staircase boundary.
    pub fn perimeter(&self, k: &RadialKernel) -> f64 {
        let h = self.cell_size();
        let occupied = |i: isize, j: isize| {
            i >= 0 && j >= 0 && (i as usize) < self.n && (j as usize) < self.n && self.cell(i as usize, j as usize)
        };
        let mut sum = 0.0;
        for j in -1..self.n as isize {
            for i in -1..self.n as isize {
                let here = occupied(i, j);
                let x = -self.extent + (i as f64 + 1.0) * h;
                let y = -self.extent + (j as f64 + 1.0) * h;
                if here != occupied(i + 1, j) {
                    sum += h * k.f(x.hypot(y - 0.5 * h));
                }
                if here != occupied(i, j + 1) {
                    sum += h * k.f((x - 0.5 * h).hypot(y));
                }
            }
        }
        sum
    }
}

/// Symmetral of a raster from per-ring cell counts. The section length in a
/// ring is estimated as occupied area over ring width, so errors are of the
/// order of the cell size.
pub fn symmetrize_raster(r: &Raster, k: &RadialKernel, rings: usize) -> Result<Symmetrized> {
    let (_, hi) = k.domain();
    let top = r.extent * std::f64::consts::SQRT_2;
    if hi < top {
        return Err(Error::Domain(format!("kernel must reach radius {top}")));
    }
    let dr = top / rings as f64;
    let h = r.cell_size();
    let mut area = vec![0.0; rings];
    for j in 0..r.n {
        for i in 0..r.n {
            if r.cell(i, j) {
                let (x, y) = r.center(i, j);
                let ring = ((x.hypot(y) / dr) as usize).min(rings - 1);
                area[ring] += h * h;
            }
        }
    }
    let mut nodes = vec![(0.0, (area[0] / (dr * dr)).min(PI))];
    for (q, &a) in area.iter().enumerate() {
        let t = (q as f64 + 0.5) * dr;
        nodes.push((t, (a / dr / (2.0 * t)).min(PI)));
    }
    nodes.push((top, 0.0));
    let profile = CapProfile::new(0.0, &nodes)?;
    let after = Component::Cap(profile.clone());
    Ok(Symmetrized {
        perimeter_before: r.perimeter(k),
        perimeter_after: cap_perimeter(&profile, k)?,
        volume_before: r.volume(k),
        volume_after: component_volume(&after, k)?,
        profile,
        exact: false,
        volume_disc: 0.0,
        perimeter_disc: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Density;
    use approx::assert_abs_diff_eq;

    fn kernel(d: &Density, r: f64) -> RadialKernel {
        RadialKernel::from_density(d, r, 1e-12).unwrap()
    }

    #[test]
    fn centered_ball_is_fixed() {
        let k = kernel(&Density::power(1.0, 2.0, 0.0).unwrap(), 2.0);
        let s = ShapeUnion::single(Component::CenteredBall { r: 1.3 }).unwrap();
        let out = symmetrize(&s, &k).unwrap();
        assert!(out.exact);
        assert_abs_diff_eq!(out.perimeter_before, out.perimeter_after, epsilon = 1e-9);
        assert_abs_diff_eq!(out.volume_before, out.volume_after, epsilon = 1e-9);
    }

    #[test]
    fn upper_half_disk_rotates() {
        let k = kernel(&Density::linear(0.7, 0.0).unwrap(), 2.0);
        let p = CapProfile::new(PI / 2.0, &[(0.0, PI / 2.0), (1.0, PI / 2.0)]).unwrap();
        let s = ShapeUnion::single(Component::Cap(p)).unwrap();
        let out = symmetrize(&s, &k).unwrap();
        assert_eq!(out.profile.rotation, 0.0);
        assert_abs_diff_eq!(out.perimeter_before, out.perimeter_after, epsilon = 1e-9);
    }

    #[test]
    fn two_bumps_lose_perimeter() {
        let k = kernel(&Density::constant(0.0), 3.0);
        let b1 = CapProfile::new(0.5, &[(1.0, 0.3), (2.0, 0.3)]).unwrap();
        let b2 = CapProfile::new(-1.5, &[(1.0, 0.2), (2.0, 0.2)]).unwrap();
        let s = ShapeUnion::new(vec![Component::Cap(b1), Component::Cap(b2)]).unwrap();
        let out = symmetrize(&s, &k).unwrap();
        // four radial sides become two
        assert_abs_diff_eq!(out.perimeter_before - out.perimeter_after, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.volume_before, out.volume_after, epsilon = 1e-12);
    }

    #[test]
    fn raster_close_to_exact() {
        let k = kernel(&Density::constant(0.0), 3.0);
        let s = ShapeUnion::single(Component::OffCenterBall { cx: 0.8, cy: 0.4, r: 0.6 }).unwrap();
        let exact = symmetrize(&s, &k).unwrap();
        let r = Raster::from_shape(&s, 2.0, 400);
        let approx = symmetrize_raster(&r, &k, 50).unwrap();
        assert_abs_diff_eq!(approx.volume_after, exact.volume_after, epsilon = 0.02);
        assert!(approx.perimeter_after <= approx.perimeter_before);
        assert!(exact.perimeter_after <= exact.perimeter_before + 1e-9);
    }

    #[test]
    fn sampled_ball_error_is_bounded() {
        // a ball centered on the axis is its own symmetral, so any change is
        // interpolation error
        let k = kernel(&Density::linear(0.5, 0.0).unwrap(), 3.0);
        let s = ShapeUnion::single(Component::OffCenterBall { cx: 1.5, cy: 0.0, r: 0.7 }).unwrap();
        let out = symmetrize(&s, &k).unwrap();
        assert!(!out.exact);
        assert!(out.volume_disc > 0.0 && out.volume_disc < 1e-4 * out.volume_before);
        assert!((out.volume_after - out.volume_before).abs() <= out.volume_disc);
        assert!((out.perimeter_after - out.perimeter_before).abs() <= out.perimeter_disc);
    }
}
