//! Radial free fall in the (possibly evaporating) Schwarzschild exterior.
//!
//! One integration yields both observers' views: Alice's proper time `λ` and
//! the Schwarzschild time `τ` of a fiducial observer are both carried in every
//! [`GeodesicState`], so `(τ, r)` and `(λ, r)` are projections of the same
//! [`Trajectory`].

mod cycloid;
mod dynamics;
mod infall;
mod profile;

pub use cycloid::{
    analytic_cycloid, cycloid_coordinate_time, cycloid_proper_time_at_radius, cycloid_radius_at,
    fall_time_to_singularity,
};
pub use dynamics::{
    geodesic_rhs, initial_state, initial_state_at_rest, CoordinateTimeSystem, GeodesicDerivatives,
    ProperTimeSystem,
};
pub use infall::{detect_events, integrate_radial};
pub use profile::{coordinate_time_profile, TimeProfile, DEFAULT_TAIL_WINDOW};

use crate::error::{Error, Result};
use crate::integrator::StepControl;
use crate::schwarzschild::SpacetimeParams;
use crate::units::C;

/// Point on Alice's worldline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    /// Alice's proper time.
    pub lambda: f64,
    /// Schwarzschild coordinate time.
    pub tau: f64,
    /// Areal radius.
    pub r: f64,
    /// dτ/dλ.
    pub u0: f64,
    /// dr/dλ.
    pub ur: f64,
}

/// Independent variable of the numerical integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parametrization {
    /// Proper time for eternal holes, Schwarzschild time for evaporating ones.
    #[default]
    Auto,
    ProperTime,
    CoordinateTime,
}

impl Parametrization {
    pub fn resolve(self, params: &SpacetimeParams) -> Parametrization {
        match self {
            Parametrization::Auto if params.is_eternal() => Parametrization::ProperTime,
            Parametrization::Auto => Parametrization::CoordinateTime,
            p => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parametrization::Auto => "auto",
            Parametrization::ProperTime => "proper_time",
            Parametrization::CoordinateTime => "coordinate_time",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerminationKind {
    HorizonTouch,
    EvaporationComplete,
    LambdaMax,
    TauMax,
    RMinCutoff,
}

impl TerminationKind {
    pub fn name(self) -> &'static str {
        match self {
            TerminationKind::HorizonTouch => "horizon_touch",
            TerminationKind::EvaporationComplete => "evaporation_complete",
            TerminationKind::LambdaMax => "lambda_max",
            TerminationKind::TauMax => "tau_max",
            TerminationKind::RMinCutoff => "r_min_cutoff",
        }
    }
}

/// Why and where an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Termination {
    pub kind: TerminationKind,
    pub state: GeodesicState,
    /// Value of the triggering sign function at the reported point.
    pub residual: f64,
    /// For a horizon touch of an evaporating hole: whether it coincides with
    /// the evaporation time within `max(event_tol, 1e-3·τ_evap)`.
    pub coincides_with_evaporation: Option<bool>,
}

/// Trajectory sample with derived columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: GeodesicState,
    /// Horizon radius R(τ).
    pub horizon_radius: f64,
    /// 1 − R(τ)/r.
    pub lapse: f64,
    /// E = f·u0, conserved for a static hole.
    pub energy: f64,
    /// Normalization residual `(f c²u0² − ur²/f − c²)/(f c²u0² + ur²/f)`.
    pub norm_residual: f64,
    /// |dR/dτ| at the sample time.
    pub flux: f64,
}

impl Sample {
    pub fn from_state(state: GeodesicState, params: &SpacetimeParams) -> Sample {
        let radius = params.radius_at(state.tau);
        let f = (state.r - radius) / state.r;
        let time_part = f * C * C * state.u0 * state.u0;
        let space_part = state.ur * state.ur / f;
        let flux = if params.is_eternal() {
            0.0
        } else {
            params
                .law()
                .flux_proxy(state.tau.max(0.0))
                .unwrap_or(f64::INFINITY)
        };
        Sample {
            state,
            horizon_radius: radius,
            lapse: f,
            energy: f * state.u0,
            norm_residual: (time_part - space_part - C * C) / (time_part + space_part),
            flux,
        }
    }

    /// Gap between Alice and the horizon, r − R(τ).
    pub fn gap(&self) -> f64 {
        self.state.r - self.horizon_radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub parametrization: Parametrization,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory holds at least its initial sample")
    }

    /// Smallest r − R(τ) over all samples.
    pub fn min_gap(&self) -> f64 {
        self.samples
            .iter()
            .map(Sample::gap)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Tolerances, step bounds, cutoffs and output options of [`integrate_radial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Exterior cutoff as a fraction of R0.
    pub epsilon_horizon: f64,
    /// Sign-function tolerance for event location.
    pub event_tol: f64,
    pub lambda_max: f64,
    pub tau_max: f64,
    /// Radius cutoff; `None` selects R0·(1 + ε_horizon) for an eternal hole
    /// and disables the cutoff otherwise.
    pub r_min: Option<f64>,
    /// Spacing of the uniform output grid in the independent variable.
    pub output_step: Option<f64>,
    pub parametrization: Parametrization,
    /// Keep the ∂τf Christoffel terms dropped by the quasi-static model.
    pub include_dtau_metric_terms: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-15,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: 1.0,
            max_steps: 2_000_000,
            epsilon_horizon: 1e-6,
            event_tol: 1e-12,
            lambda_max: 1e4,
            tau_max: f64::INFINITY,
            r_min: None,
            output_step: None,
            parametrization: Parametrization::Auto,
            include_dtau_metric_terms: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, value: f64| {
            if value > 0.0 && !value.is_nan() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive",
                })
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("h_init", self.h_init)?;
        positive("h_min", self.h_min)?;
        positive("h_max", self.h_max)?;
        positive("event_tol", self.event_tol)?;
        positive("lambda_max", self.lambda_max)?;
        positive("tau_max", self.tau_max)?;
        if self.h_min > self.h_max {
            return Err(Error::InvalidParameter {
                name: "h_min",
                value: self.h_min,
                reason: "must not exceed h_max",
            });
        }
        if !(self.epsilon_horizon > 0.0 && self.epsilon_horizon < 1e-2) {
            return Err(Error::InvalidParameter {
                name: "epsilon_horizon",
                value: self.epsilon_horizon,
                reason: "must lie in (0, 1e-2)",
            });
        }
        if self.event_tol >= self.rel_tol {
            return Err(Error::InvalidParameter {
                name: "event_tol",
                value: self.event_tol,
                reason: "must be below rel_tol",
            });
        }
        if let Some(step) = self.output_step {
            positive("output_step", step)?;
        }
        if let Some(r_min) = self.r_min {
            if !(r_min >= 0.0 && r_min.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "r_min",
                    value: r_min,
                    reason: "must be finite and non-negative",
                });
            }
        }
        Ok(())
    }

    pub(crate) fn step_control(&self) -> StepControl {
        StepControl {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: self.h_init,
            h_min: self.h_min,
            h_max: self.h_max,
            max_steps: self.max_steps,
        }
    }

    /// Effective radius cutoff for `params`.
    pub fn effective_r_min(&self, params: &SpacetimeParams) -> Option<f64> {
        match self.r_min {
            Some(r) => Some(r),
            None if params.is_eternal() => Some(params.radius0() * (1.0 + self.epsilon_horizon)),
            None => None,
        }
    }
}
