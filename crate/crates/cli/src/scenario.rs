//! Scenario runners producing [`OutputTable`]s.

use horizonlab_core::geodesic::{
    cycloid_coordinate_time, cycloid_proper_time_at_radius, fall_time_to_singularity,
};
use horizonlab_core::rindler::{alice_worldline, rob_worldline, simultaneity_slope};
use horizonlab_core::units::Dimension;
use horizonlab_core::{
    causal_reachable, initial_state, integrate_radial, Error as CoreError, IntegratorConfig,
    MinkowskiEvent, Parametrization, RindlerFrame, SpacetimeParams, Trajectory,
};
use serde_json::{json, Value};

use crate::config::{Fig1Config, InfallConfig, UnitSystem, Variant};
use crate::table::OutputTable;

/// Series ids of the fig1 table.
pub const SERIES: [(u8, &str); 5] = [
    (0, "rob"),
    (1, "alice"),
    (2, "horizon"),
    (3, "simultaneity"),
    (4, "signal"),
];

pub const FIG1_COLUMNS: [&str; 3] = ["series", "ct", "x"];

pub const INFALL_COLUMNS: [&str; 10] = [
    "lambda",
    "tau",
    "r",
    "R_tau",
    "f",
    "u0",
    "ur",
    "energy",
    "norm_residual",
    "flux_proxy",
];

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + i as f64 * step })
}

/// Minkowski diagram of Rob's frame: his hyperbola, Alice's inertial line,
/// the horizon, one line of simultaneity and one signal sent toward the
/// region beyond the horizon. Lengths `ct`, `x` are the same in both unit systems.
pub fn run_fig1(cfg: &Fig1Config, units: UnitSystem) -> Result<OutputTable, CoreError> {
    let frame = RindlerFrame::new(cfg.a)?;
    let d = frame.horizon_distance();
    let (lo, hi) = cfg.tau_range;
    let n = cfg.samples;
    let ct_extent = rob_worldline(&frame, lo)
        .ct
        .abs()
        .max(rob_worldline(&frame, hi).ct.abs());
    let x_extent = rob_worldline(&frame, lo).x.max(rob_worldline(&frame, hi).x);

    let mut t = OutputTable::new(FIG1_COLUMNS);
    let mut push = |id: u8, e: MinkowskiEvent| t.push(vec![f64::from(id), e.ct, e.x]);

    for tau in linspace(lo, hi, n) {
        push(0, rob_worldline(&frame, tau));
    }
    for ct in linspace(0.0, ct_extent, n) {
        push(1, alice_worldline(&frame, ct));
    }
    for x in linspace(0.0, ct_extent, n) {
        push(2, MinkowskiEvent::longitudinal(x, x));
    }
    let slope = simultaneity_slope(&frame, cfg.simultaneity_tau);
    for x in linspace(0.0, x_extent, n) {
        push(3, MinkowskiEvent::longitudinal(slope * x, x));
    }
    // Inward null ray from Rob; it crosses ct = x after a coordinate
    // distance (x_R − ct_R)/2 and is followed to twice that or to the
    // diagram's upper edge, whichever is later.
    let emit = rob_worldline(&frame, cfg.signal_tau);
    let crossing = 0.5 * (emit.x - emit.ct);
    let length = (2.0 * crossing).max(ct_extent - emit.ct);
    let end = MinkowskiEvent::longitudinal(emit.ct + length, emit.x - length);
    if !causal_reachable(&emit, &end)? {
        return Err(CoreError::InvalidParameter {
            name: "signal_tau",
            value: cfg.signal_tau,
            reason: "signal ray does not reach the region beyond the horizon",
        });
    }
    for u in linspace(0.0, length, n) {
        push(4, MinkowskiEvent::longitudinal(emit.ct + u, emit.x - u));
    }

    let time = |v: f64| units.from_geometric(v, Dimension::Time);
    t.set_meta("mode", "fig1");
    t.set_meta("units", units.name());
    t.set_meta("a", units.from_geometric(cfg.a, Dimension::Acceleration));
    t.set_meta("horizon_distance", d);
    t.set_meta("tau_range", json!([time(lo), time(hi)]));
    t.set_meta("samples", n);
    t.set_meta("simultaneity_tau", time(cfg.simultaneity_tau));
    t.set_meta("simultaneity_slope", slope);
    t.set_meta("signal_tau", time(cfg.signal_tau));
    t.set_meta("signal_horizon_crossing_ct", emit.ct + crossing);
    t.set_meta(
        "series",
        Value::Object(
            SERIES
                .iter()
                .map(|(id, name)| (id.to_string(), Value::from(*name)))
                .collect(),
        ),
    );
    Ok(t)
}

/// Extent of the output grid in the independent variable, estimated from
/// the cycloid for a fall from rest (or the equivalent release radius) and
/// capped by the budgets.
fn grid_span(
    cfg: &InfallConfig,
    params: &SpacetimeParams,
    parametrization: Parametrization,
    energy: f64,
) -> f64 {
    let integ = &cfg.integrator;
    let radius = params.radius0();
    // Bound orbits behave like a fall from rest at r_max with E² = 1 − R/r_max.
    let r_max = if cfg.ur0 <= 0.0 && energy < 1.0 {
        Some(radius / (1.0 - energy * energy)).filter(|r| r.is_finite())
    } else {
        None
    };
    let r_end = integ.effective_r_min(params).unwrap_or(radius).max(radius);
    match parametrization {
        Parametrization::CoordinateTime => {
            let natural = match (params.law().evaporation_time(), r_max) {
                (Ok(tau_evap), _) => tau_evap,
                (Err(_), Some(r_max)) => {
                    let eta = |r: f64| (2.0 * r / r_max - 1.0).clamp(-1.0, 1.0).acos();
                    cycloid_coordinate_time(r_max, radius, eta(r_end))
                        - cycloid_coordinate_time(r_max, radius, eta(cfg.r0))
                }
                (Err(_), None) => f64::NAN,
            };
            pick(natural, integ.tau_max)
        }
        _ => {
            let natural = match r_max {
                Some(r_max) => {
                    let end = if params.is_eternal() {
                        cycloid_proper_time_at_radius(r_max, radius, r_end)
                    } else {
                        fall_time_to_singularity(r_max, radius)
                    };
                    end - cycloid_proper_time_at_radius(r_max, radius, cfg.r0)
                }
                None => f64::NAN,
            };
            pick(natural, integ.lambda_max)
        }
    }
}

fn pick(natural: f64, budget: f64) -> f64 {
    if natural.is_finite() && natural > 0.0 {
        natural.min(budget)
    } else {
        budget
    }
}

/// Integrates Alice's fall and tabulates every sample. Rows are the union of
/// a uniform grid of `samples` points in the independent variable, the
/// integrator's step ends and the terminating event; they are ordered in
/// time. `(tau, r)` is Rob's view, `(lambda, r)` Alice's.
pub fn run_infall(cfg: &InfallConfig, units: UnitSystem) -> Result<OutputTable, CoreError> {
    let params = SpacetimeParams::new(cfg.radius0, cfg.k)?;
    let init = initial_state(cfg.r0, cfg.ur0, &params)?;
    let parametrization = cfg.integrator.parametrization.resolve(&params);
    let energy = (1.0 - cfg.radius0 / cfg.r0) * init.u0;
    let span = grid_span(cfg, &params, parametrization, energy);
    let output_step = span / (cfg.samples - 1) as f64;
    let integrator = IntegratorConfig {
        output_step: Some(output_step),
        h_max: if cfg.h_max_given {
            cfg.integrator.h_max
        } else {
            cfg.integrator.h_max.max(span / 100.0)
        },
        ..cfg.integrator
    };
    let traj = integrate_radial(&init, &params, &integrator)?;
    Ok(infall_table(cfg, &params, &integrator, &traj, units))
}

fn infall_table(
    cfg: &InfallConfig,
    params: &SpacetimeParams,
    integrator: &IntegratorConfig,
    traj: &Trajectory,
    units: UnitSystem,
) -> OutputTable {
    let time = |v: f64| units.from_geometric(v, Dimension::Time);
    let length = |v: f64| units.from_geometric(v, Dimension::Length);
    let c = units.c();

    let mut t = OutputTable::new(INFALL_COLUMNS);
    for s in &traj.samples {
        let st = s.state;
        t.push(vec![
            time(st.lambda),
            time(st.tau),
            length(st.r),
            length(s.horizon_radius),
            s.lapse,
            st.u0,
            st.ur * c,
            s.energy,
            s.norm_residual,
            s.flux * c,
        ]);
    }

    let term = &traj.termination;
    let tau_evap = params.law().evaporation_time().ok();
    t.set_meta("mode", "infall");
    t.set_meta("units", units.name());
    t.set_meta(
        "variant",
        match cfg.variant {
            Variant::Eternal => "eternal",
            Variant::Evaporating => "evaporating",
        },
    );
    t.set_meta("R0", length(cfg.radius0));
    t.set_meta("k", cfg.k * c);
    t.set_meta("tau_evap", tau_evap.map(time));
    t.set_meta("r0", length(cfg.r0));
    t.set_meta("ur0", cfg.ur0 * c);
    t.set_meta("parametrization", traj.parametrization.name());
    t.set_meta(
        "include_dtau_metric_terms",
        integrator.include_dtau_metric_terms,
    );
    t.set_meta("rel_tol", integrator.rel_tol);
    t.set_meta("abs_tol", integrator.abs_tol);
    t.set_meta("event_tol", integrator.event_tol);
    t.set_meta("epsilon_horizon", integrator.epsilon_horizon);
    t.set_meta("r_min", integrator.effective_r_min(params).map(length));
    t.set_meta("samples", cfg.samples);
    t.set_meta(
        "output_step",
        time(integrator.output_step.unwrap_or(f64::NAN)),
    );
    t.set_meta("rows", traj.samples.len());
    t.set_meta("termination", term.kind.name());
    t.set_meta("event_lambda", time(term.state.lambda));
    t.set_meta("event_tau", time(term.state.tau));
    t.set_meta("event_r", length(term.state.r));
    t.set_meta("event_residual", term.residual);
    t.set_meta(
        "coincides_with_evaporation",
        term.coincides_with_evaporation,
    );
    t.set_meta("min_gap", length(traj.min_gap()));
    t.set_meta("accepted_steps", traj.accepted_steps);
    t.set_meta("rejected_steps", traj.rejected_steps);
    t
}
