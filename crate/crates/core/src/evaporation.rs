//! Quasi-static evaporation: the horizon radius shrinks as
//! `R(τ) = (R0³ − kτ)^{1/3}`, so that `R³` (mass cubed, up to constants)
//! decays linearly in Schwarzschild time and vanishes at `τ_evap = R0³/k`.
//!
//! Written with `R0³` rather than `R0` inside the cube root so the law is
//! dimensionally consistent; for `R0 = 1` the two forms coincide.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaporationLaw {
    radius0: f64,
    k: f64,
}

impl EvaporationLaw {
    pub fn new(radius0: f64, k: f64) -> Result<Self> {
        if !(radius0.is_finite() && radius0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "R0",
                value: radius0,
                reason: "initial radius must be non-negative",
            });
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k,
                reason: "evaporation constant must be non-negative",
            });
        }
        Ok(EvaporationLaw { radius0, k })
    }

    pub fn radius0(&self) -> f64 {
        self.radius0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    fn radius_cubed(&self, tau: f64) -> f64 {
        self.radius0 * self.radius0 * self.radius0 - self.k * tau
    }

    /// Radius at `tau`; zero from the evaporation time on.
    pub fn radius_at(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: "time must be non-negative",
            });
        }
        Ok(self.radius_at_clamped(tau))
    }

    /// Radius at `tau` without the domain check; negative times return `R0`-side values.
    pub(crate) fn radius_at_clamped(&self, tau: f64) -> f64 {
        if self.k == 0.0 {
            return self.radius0;
        }
        let m = self.radius_cubed(tau);
        if m <= 0.0 {
            0.0
        } else {
            m.cbrt()
        }
    }

    /// `dR/dτ = −k/(3R²)`; zero for an eternal hole or once evaporated.
    pub(crate) fn radius_rate(&self, tau: f64) -> f64 {
        let r = self.radius_at_clamped(tau);
        if self.k == 0.0 || r == 0.0 {
            0.0
        } else {
            -self.k / (3.0 * r * r)
        }
    }

    /// Evaporation time `R0³/k`.
    pub fn evaporation_time(&self) -> Result<f64> {
        if self.k == 0.0 {
            return Err(Error::EternalBlackHole);
        }
        Ok(self.radius0 * self.radius0 * self.radius0 / self.k)
    }

    /// Radiated-flux proxy `|dR/dτ| = k/(3R(τ)²)`, defined before the evaporation time.
    pub fn flux_proxy(&self, tau: f64) -> Result<f64> {
        let r = self.radius_at(tau)?;
        if self.k == 0.0 {
            return Ok(0.0);
        }
        if r == 0.0 {
            return Err(Error::PastEvaporation {
                tau,
                tau_evap: self.evaporation_time()?,
            });
        }
        Ok(self.k / (3.0 * r * r))
    }
}

/// Evaporation constant that makes a hole of radius `radius0` vanish at `tau_evap`.
pub fn calibrate_k(radius0: f64, tau_evap: f64) -> Result<f64> {
    for (name, value) in [("R0", radius0), ("tau_evap", tau_evap)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                value,
                reason: "must be positive",
            });
        }
    }
    Ok(radius0 * radius0 * radius0 / tau_evap)
}
