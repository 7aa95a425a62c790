//! Ball perimeter at fixed volume, centered-annuli competitors and the
//! uniqueness probe for plateau densities.

mod compete;
mod uniqueness;

pub use compete::{compete, CompeteOptions, CompetitionResult, TraceRow};
pub use uniqueness::{uniqueness_probe, ProbeEntry, ProbeKind, UniquenessReport};

use std::f64::consts::PI;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::geometry::{Component, ShapeUnion};
use crate::kernel::RadialKernel;

/// Ball with weighted volume `v`: radius and perimeter `I_f(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub v: f64,
    pub r: f64,
    pub perimeter: f64,
    /// `|2π g(r) - 2π J(v/2π)|`.
    pub consistency: f64,
}

pub fn profile_value(k: &RadialKernel, v: f64) -> Result<ProfileValue> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Input(format!("v must be positive, got {v}")));
    }
    let s = v / (2.0 * PI);
    let r = k.inverse(s)?;
    let perimeter = 2.0 * PI * k.g(r);
    let consistency = (perimeter - 2.0 * PI * k.j(s)?).abs();
    Ok(ProfileValue { v, r, perimeter, consistency })
}

/// `profile_value` with a kernel sized for `v`.
pub fn profile_value_for(d: &Density, v: f64, eps: f64) -> Result<ProfileValue> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Input(format!("v must be positive, got {v}")));
    }
    profile_value(&RadialKernel::covering(d, v / (2.0 * PI), eps)?, v)
}

/// Union of centered annuli `(a₁, a₀) ∪ (a₃, a₂) ∪ …` from strictly
/// decreasing radii; an even count, the last radius may be 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnuliConfig {
    radii: Vec<f64>,
}

impl AnnuliConfig {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || !radii.len().is_multiple_of(2) {
            return Err(Error::Input(format!("need an even, nonzero number of radii, got {}", radii.len())));
        }
        if !(radii[radii.len() - 1] >= 0.0) || radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::Input("radii must be finite and nonnegative".into()));
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Input("radii must be strictly decreasing".into()));
        }
        Ok(Self { radii })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn annuli(&self) -> usize {
        self.radii.len() / 2
    }

    /// `t_h = G(a_h)`.
    pub fn masses(&self, k: &RadialKernel) -> Result<Vec<f64>> {
        self.radii.iter().map(|&a| k.primitive(a)).collect()
    }

    pub fn to_shape(&self) -> Result<ShapeUnion> {
        let comps = self
            .radii
            .chunks(2)
            .map(|p| {
                if p[1] == 0.0 {
                    Component::CenteredBall { r: p[0] }
                } else {
                    Component::Annulus { inner: p[1], outer: p[0] }
                }
            })
            .collect();
        ShapeUnion::new(comps)
    }
}

/// `(V_f, P_f) = (2π Σ (-1)^h G(a_h), 2π Σ g(a_h))`.
pub fn annuli_measures(c: &AnnuliConfig, k: &RadialKernel) -> Result<(f64, f64)> {
    let t = c.masses(k)?;
    let v = 2.0 * PI * alternating_sum(&t);
    let p = 2.0 * PI * c.radii.iter().map(|&a| k.g(a)).sum::<f64>();
    Ok((v, p))
}

fn alternating_sum(t: &[f64]) -> f64 {
    t.chunks(2).map(|p| p[0] - p.get(1).copied().unwrap_or(0.0)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superadditivity {
    /// `Σ J(t_h)`.
    pub lhs: f64,
    /// `J(Σ (-1)^h t_h)`.
    pub rhs: f64,
    pub holds: bool,
}

impl Superadditivity {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Relative tolerance of the superadditivity comparison.
pub const SUPERADDITIVE_TOL: f64 = 1e-9;

pub fn superadditivity_check(k: &RadialKernel, t: &[f64]) -> Result<Superadditivity> {
    if t.is_empty() {
        return Err(Error::Input("empty sequence".into()));
    }
    if t.windows(2).any(|w| w[1] >= w[0]) || t[t.len() - 1] < 0.0 {
        return Err(Error::Input("sequence must be strictly decreasing and nonnegative".into()));
    }
    let lhs = t.iter().map(|&x| k.j(x)).sum::<Result<f64>>()?;
    let rhs = k.j(alternating_sum(t))?;
    Ok(Superadditivity { lhs, rhs, holds: lhs >= rhs - SUPERADDITIVE_TOL * (1.0 + lhs) })
}
