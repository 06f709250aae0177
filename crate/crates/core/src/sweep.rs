//! Embarrassingly parallel batches: event transforms, cutoff refinement and
//! tolerance studies. With the `parallel` feature the work is spread over the
//! rayon pool; otherwise (or with [`Execution::Sequential`]) it runs in order.
//! Results are returned in input order either way, so both paths are
//! bitwise identical.

use crate::error::Result;
use crate::geodesic::{
    analytic_cycloid, initial_state_at_rest, integrate_radial, GeodesicState, IntegratorConfig,
    Termination, Trajectory,
};
use crate::rindler::{minkowski_to_rindler, rindler_to_minkowski, RindlerEvent, RindlerFrame};
use crate::schwarzschild::SpacetimeParams;
use crate::spacetime::MinkowskiEvent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when built with the `parallel` feature.
    #[default]
    Parallel,
}

/// Order-preserving map over `items`.
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn batch_to_rindler(
    frame: &RindlerFrame,
    events: &[MinkowskiEvent],
    exec: Execution,
) -> Vec<Result<RindlerEvent>> {
    map(exec, events, |e| minkowski_to_rindler(e, frame))
}

pub fn batch_to_minkowski(
    frame: &RindlerFrame,
    events: &[RindlerEvent],
    exec: Execution,
) -> Vec<Result<MinkowskiEvent>> {
    map(exec, events, |e| rindler_to_minkowski(e, frame))
}

/// Terminations of the same infall at each horizon cutoff `ε`.
pub fn cutoff_refinement(
    init: &GeodesicState,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
    epsilons: &[f64],
    exec: Execution,
) -> Vec<Result<Termination>> {
    map(exec, epsilons, |&eps| {
        let cfg = IntegratorConfig {
            epsilon_horizon: eps,
            ..*cfg
        };
        integrate_radial(init, params, &cfg).map(|t| t.termination)
    })
}

/// Deviation of one eternal infall from the analytic cycloid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDeviation {
    pub rel_tol: f64,
    /// max |r_num − r_exact| / r_exact over all samples.
    pub max_rel_r: f64,
    pub accepted_steps: usize,
}

/// Compares a numerical infall from rest at `r0` with the cycloid.
pub fn oracle_deviation(
    r0: f64,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, OracleDeviation)> {
    let init = initial_state_at_rest(r0, params)?;
    let traj = integrate_radial(&init, params, cfg)?;
    let grid: Vec<f64> = traj.samples.iter().map(|s| s.state.lambda).collect();
    let oracle = analytic_cycloid(r0, params, &grid)?;
    let max_rel_r = traj
        .samples
        .iter()
        .zip(&oracle.samples)
        .map(|(n, e)| ((n.state.r - e.state.r) / e.state.r).abs())
        .fold(0.0, f64::max);
    let dev = OracleDeviation {
        rel_tol: cfg.rel_tol,
        max_rel_r,
        accepted_steps: traj.accepted_steps,
    };
    Ok((traj, dev))
}

/// Oracle deviation at each relative tolerance (absolute tolerance scaled alongside).
pub fn tolerance_study(
    r0: f64,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
    rel_tols: &[f64],
    exec: Execution,
) -> Vec<Result<OracleDeviation>> {
    map(exec, rel_tols, |&rel_tol| {
        let cfg = IntegratorConfig {
            rel_tol,
            abs_tol: cfg.abs_tol * rel_tol / cfg.rel_tol,
            event_tol: cfg.event_tol.min(rel_tol * 1e-2),
            ..*cfg
        };
        oracle_deviation(r0, params, &cfg).map(|(_, d)| d)
    })
}

/// Independent infalls from rest at each starting radius.
pub fn infall_sweep(
    radii: &[f64],
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
    exec: Execution,
) -> Vec<Result<Trajectory>> {
    map(exec, radii, |&r0| {
        initial_state_at_rest(r0, params).and_then(|init| integrate_radial(&init, params, cfg))
    })
}
