use std::f64::consts::PI;

use super::{annuli_measures, profile_value, AnnuliConfig};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::geometry::{component_perimeter, component_volume, off_center_radius_for_volume, Component};
use crate::kernel::RadialKernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    /// Off-center ball inside the plateau; ties the centered ball.
    Inside,
    /// Off-center ball reaching past the plateau edge.
    Protruding,
    /// Centered annulus.
    Annulus,
}

impl ProbeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeKind::Inside => "inside",
            ProbeKind::Protruding => "protruding",
            ProbeKind::Annulus => "annulus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeEntry {
    pub kind: ProbeKind,
    /// Center distance (off-center balls) or inner radius (annuli).
    pub position: f64,
    /// Ball radius or outer radius.
    pub radius: f64,
    pub volume: f64,
    pub perimeter: f64,
    /// `perimeter - I_f(v)`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub v: f64,
    pub plateau: f64,
    /// `π R²`.
    pub v0_lebesgue: f64,
    /// `π R² e^{h(0)}`, the weighted volume of `B(0, R)`.
    pub v0_weighted: f64,
    /// `v <= v0_weighted`.
    pub below_threshold: bool,
    pub ball_radius: f64,
    pub ball_perimeter: f64,
    pub entries: Vec<ProbeEntry>,
}

impl UniquenessReport {
    /// Largest `|gap|` among competitors that should tie.
    pub fn max_tie(&self) -> f64 {
        self.entries.iter().filter(|e| e.kind == ProbeKind::Inside).map(|e| e.gap.abs()).fold(0.0, f64::max)
    }

    /// Smallest gap among competitors that should lose.
    pub fn min_loss(&self) -> f64 {
        self.entries.iter().filter(|e| e.kind != ProbeKind::Inside).map(|e| e.gap).fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self, tie_tol: f64, loss_tol: f64) -> bool {
        self.max_tie() <= tie_tol && self.min_loss() > loss_tol
    }
}

/// Compares the centered ball of volume `v` against off-center balls and
/// annuli of the same volume, for a density flat on `[0, R]`.
pub fn uniqueness_probe(d: &Density, v: f64, eps: f64) -> Result<UniquenessReport> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Input(format!("v must be positive, got {v}")));
    }
    let big_r = d
        .plateau_radius()
        .filter(|&r| r > 0.0)
        .ok_or_else(|| Error::Input("density has no finite positive plateau radius".into()))?;
    let f0 = d.h(0.0).exp();
    let v0_lebesgue = PI * big_r * big_r;
    let v0_weighted = v0_lebesgue * f0;
    let below = v <= v0_weighted;
    let probe = RadialKernel::covering(d, v / (2.0 * PI), eps)?;
    let ball = profile_value(&probe, v)?;
    let r = ball.r;
    let reach = 4.0 * (r + big_r);
    let k = RadialKernel::from_density(d, reach, eps)?;
    let ball = profile_value(&k, v)?;

    let mut entries = Vec::new();
    let mut off_center = |kind: ProbeKind, c: f64| -> Result<()> {
        let rho = if kind == ProbeKind::Inside { r } else { off_center_radius_for_volume(c, v, &k)? };
        let comp = Component::OffCenterBall { cx: c, cy: 0.0, r: rho };
        let volume = component_volume(&comp, &k)?;
        let perimeter = component_perimeter(&comp, &k)?;
        entries.push(ProbeEntry { kind, position: c, radius: rho, volume, perimeter, gap: perimeter - ball.perimeter });
        Ok(())
    };
    if below {
        // balls of the same radius anywhere in the closed plateau disk
        let room = big_r - r;
        for q in [0.25, 0.5, 0.75, 1.0] {
            off_center(ProbeKind::Inside, q * room)?;
        }
        for q in [0.5, 1.0, 1.5] {
            off_center(ProbeKind::Protruding, room + q * r)?;
        }
    } else {
        // the loss is second order in the shift, so small shifts are not resolved
        for q in [0.25, 0.5, 0.75] {
            off_center(ProbeKind::Protruding, q * r)?;
        }
        for q in [0.1, 0.3, 0.6] {
            let inner = q * r;
            let outer = k.inverse(v / (2.0 * PI) + k.primitive(inner)?)?;
            let cfg = AnnuliConfig::new(vec![outer, inner])?;
            let (volume, perimeter) = annuli_measures(&cfg, &k)?;
            entries.push(ProbeEntry {
                kind: ProbeKind::Annulus,
                position: inner,
                radius: outer,
                volume,
                perimeter,
                gap: perimeter - ball.perimeter,
            });
        }
    }
    Ok(UniquenessReport {
        v,
        plateau: big_r,
        v0_lebesgue,
        v0_weighted,
        below_threshold: below,
        ball_radius: ball.r,
        ball_perimeter: ball.perimeter,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plateau() -> Density {
        Density::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0)], 0.0).unwrap()
    }

    #[test]
    fn ties_and_losses_below_threshold() {
        let rep = uniqueness_probe(&plateau(), PI / 4.0, 1e-12).unwrap();
        assert!(rep.below_threshold);
        assert!((rep.ball_perimeter - PI).abs() < 1e-12);
        assert!(rep.max_tie() <= 1e-9, "{}", rep.max_tie());
        assert!(rep.min_loss() > 1e-4, "{}", rep.min_loss());
        for e in &rep.entries {
            assert!((e.volume - PI / 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn strict_above_threshold() {
        let rep = uniqueness_probe(&plateau(), 4.0 * PI, 1e-12).unwrap();
        assert!(!rep.below_threshold);
        assert!(rep.min_loss() > 1e-4, "{:?}", rep.entries);
    }

    #[test]
    fn needs_a_plateau() {
        assert!(uniqueness_probe(&Density::constant(0.0), 1.0, 1e-10).is_err());
        assert!(uniqueness_probe(&Density::linear(1.0, 0.0).unwrap(), 1.0, 1e-10).is_err());
    }
}
