//! Exterior Schwarzschild geometry in the equatorial plane and its
//! near-horizon Rindler form.
//!
//! `ds² = f·c²dτ² − dr²/f − r²dΩ²` with `f = 1 − R/r`. Only the exterior chart
//! `r > R` is ever evaluated.

use crate::error::{ensure_finite, Error, Result};
use crate::evaporation::EvaporationLaw;
use crate::rindler;
use crate::units::C;

/// Black hole parameters: initial Schwarzschild radius and evaporation constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeParams {
    law: EvaporationLaw,
}

impl SpacetimeParams {
    pub fn new(radius0: f64, k: f64) -> Result<Self> {
        if !(radius0.is_finite() && radius0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "R0",
                value: radius0,
                reason: "Schwarzschild radius must be positive",
            });
        }
        Ok(SpacetimeParams {
            law: EvaporationLaw::new(radius0, k)?,
        })
    }

    pub fn eternal(radius0: f64) -> Result<Self> {
        SpacetimeParams::new(radius0, 0.0)
    }

    pub fn radius0(&self) -> f64 {
        self.law.radius0()
    }

    pub fn k(&self) -> f64 {
        self.law.k()
    }

    pub fn is_eternal(&self) -> bool {
        self.law.k() == 0.0
    }

    /// Mass `M = c²R0/2G` in geometric units.
    pub fn mass(&self) -> f64 {
        0.5 * self.radius0() * C * C
    }

    pub fn law(&self) -> &EvaporationLaw {
        &self.law
    }

    /// Horizon radius at Schwarzschild time `tau`; constant when eternal.
    pub fn radius_at(&self, tau: f64) -> f64 {
        self.law.radius_at_clamped(tau)
    }
}

/// Diagonal metric components at fixed θ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g_tt: f64,
    pub g_rr: f64,
    pub g_thth: f64,
    pub g_phph: f64,
    /// Lapse factor `1 − R/r` (or its near-horizon counterpart).
    pub f: f64,
}

/// `R = 2GM/c²`.
pub fn schwarzschild_radius(mass: f64) -> Result<f64> {
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "M",
            value: mass,
            reason: "mass must be non-negative",
        });
    }
    Ok(2.0 * mass / (C * C))
}

/// Exterior metric at areal radius `r` for horizon radius `radius`.
pub fn metric_components(r: f64, radius: f64) -> Result<MetricComponents> {
    ensure_finite("metric arguments", &[r, radius])?;
    if !(r > radius) {
        return Err(Error::CoordinateSingularity { r, radius });
    }
    let f = (r - radius) / r;
    Ok(MetricComponents {
        g_tt: f * C * C,
        g_rr: -1.0 / f,
        g_thth: -r * r,
        g_phph: -r * r,
        f,
    })
}

/// Proper radial distance from the horizon in the near-horizon limit, `χ = 2√(R·Δr)`.
pub fn near_horizon_chi(delta_r: f64, radius: f64) -> Result<f64> {
    ensure_finite("near-horizon arguments", &[delta_r, radius])?;
    if delta_r < 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta_r",
            value: delta_r,
            reason: "distance above the horizon must be non-negative",
        });
    }
    Ok(2.0 * (radius * delta_r).sqrt())
}

/// Antiderivative of `√(r/(r−R))`, shifted so that it vanishes at `r = R`.
fn proper_distance_from_horizon(r: f64, radius: f64) -> f64 {
    let dr = r - radius;
    let sr = r.sqrt();
    let sh = radius.sqrt();
    let sdr = dr.sqrt();
    // ln((√r + √(r−R))/√R), with √r − √R = Δr/(√r + √R) to keep the argument exact near R.
    let log_term = ((dr / (sr + sh) + sdr) / sh).ln_1p();
    (r * dr).sqrt() + radius * log_term
}

/// Exact proper radial distance `∫ √(−g_rr) dr` between `r1 ≤ r2`.
pub fn proper_distance_exact(r1: f64, r2: f64, radius: f64) -> Result<f64> {
    ensure_finite("proper distance arguments", &[r1, r2, radius])?;
    if !(r1 > radius) {
        return Err(Error::CoordinateSingularity { r: r1, radius });
    }
    if r2 < r1 {
        return Err(Error::InvalidParameter {
            name: "r2",
            value: r2,
            reason: "upper radius must not be below the lower one",
        });
    }
    if r1 == r2 {
        return Ok(0.0);
    }
    Ok(proper_distance_from_horizon(r2, radius) - proper_distance_from_horizon(r1, radius))
}

/// Near-horizon metric in Rindler form, `g_ττ = χ²c²/4R²`, `g_χχ = −1`.
pub fn near_horizon_metric(chi: f64, radius: f64) -> Result<MetricComponents> {
    ensure_finite("near-horizon arguments", &[chi, radius])?;
    if !(chi > 0.0) {
        return Err(Error::DegenerateHorizon(chi));
    }
    let a = effective_acceleration(radius)?;
    let lapse = rindler::lapse_squared(a, chi);
    Ok(MetricComponents {
        g_tt: lapse * C * C,
        g_rr: -1.0,
        g_thth: -1.0,
        g_phph: -1.0,
        f: lapse,
    })
}

/// Acceleration `c²/2R` of the Rindler frame matching the near-horizon geometry.
pub fn effective_acceleration(radius: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "Schwarzschild radius must be positive",
        });
    }
    Ok(C * C / (2.0 * radius))
}
