//! Radial free fall toward three kinds of horizon: the Rindler horizon of a
//! uniformly accelerated observer, the eternal Schwarzschild horizon, and the
//! shrinking horizon of a quasi-statically evaporating black hole.
//!
//! All quantities are in geometric units (`c = G = 1`); see [`units`].

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evaporation;
pub mod geodesic;
pub mod integrator;
pub mod rindler;
pub mod schwarzschild;
pub mod spacetime;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use evaporation::{calibrate_k, EvaporationLaw};
pub use geodesic::{
    analytic_cycloid, coordinate_time_profile, detect_events, initial_state, initial_state_at_rest,
    integrate_radial, GeodesicState, IntegratorConfig, Parametrization, Sample, Termination,
    TerminationKind, TimeProfile, Trajectory,
};
pub use rindler::{minkowski_to_rindler, rindler_to_minkowski, RindlerEvent, RindlerFrame};
pub use schwarzschild::{
    effective_acceleration, metric_components, near_horizon_metric, schwarzschild_radius,
    MetricComponents, SpacetimeParams,
};
pub use spacetime::{causal_reachable, interval_minkowski, CausalClass, Interval, MinkowskiEvent};
pub use units::{convert_units, Dimension, Direction};
