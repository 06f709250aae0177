use super::dynamics::{CoordinateTimeSystem, ProperTimeSystem};
use super::{
    GeodesicState, IntegratorConfig, Parametrization, Sample, Termination, TerminationKind,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::integrator::{fixed_step, DenseSegment, Dopri5, OdeSystem};
use crate::schwarzschild::SpacetimeParams;

/// Sign functions monitored during an integration; each is positive at the
/// start and triggers when it reaches zero.
#[derive(Debug, Clone, Copy)]
struct Monitor {
    kind: TerminationKind,
    threshold: f64,
}

fn monitors(params: &SpacetimeParams, cfg: &IntegratorConfig) -> Vec<Monitor> {
    let mut out = Vec::with_capacity(5);
    if !params.is_eternal() {
        out.push(Monitor {
            kind: TerminationKind::HorizonTouch,
            threshold: cfg.epsilon_horizon * params.radius0(),
        });
        if let Ok(tau_evap) = params.law().evaporation_time() {
            out.push(Monitor {
                kind: TerminationKind::EvaporationComplete,
                threshold: tau_evap,
            });
        }
    }
    if let Some(r_min) = cfg.effective_r_min(params) {
        out.push(Monitor {
            kind: TerminationKind::RMinCutoff,
            threshold: r_min,
        });
    }
    out.push(Monitor {
        kind: TerminationKind::LambdaMax,
        threshold: cfg.lambda_max,
    });
    if cfg.tau_max.is_finite() {
        out.push(Monitor {
            kind: TerminationKind::TauMax,
            threshold: cfg.tau_max,
        });
    }
    out
}

impl Monitor {
    fn value(&self, s: &GeodesicState, params: &SpacetimeParams) -> f64 {
        match self.kind {
            TerminationKind::HorizonTouch => s.r - params.radius_at(s.tau) - self.threshold,
            TerminationKind::EvaporationComplete => self.threshold - s.tau,
            TerminationKind::RMinCutoff => s.r - self.threshold,
            TerminationKind::LambdaMax => self.threshold - s.lambda,
            TerminationKind::TauMax => self.threshold - s.tau,
        }
    }
}

fn unpack(parametrization: Parametrization, t: f64, y: &[f64; 4]) -> GeodesicState {
    match parametrization {
        Parametrization::CoordinateTime => CoordinateTimeSystem::unpack(t, y),
        _ => ProperTimeSystem::unpack(t, y),
    }
}

/// Locates the first zero of `m` on the segment; `None` if it does not change sign.
/// The returned point lies on the positive side with `|g| < event_tol`, unless
/// the bracket collapses to adjacent floats first.
///
/// Trial points are reached by a fresh Runge–Kutta step from the segment
/// start, so the reported state carries the step's full order; the
/// interpolant is only the fallback when such a step leaves the domain.
fn locate<S: OdeSystem<4>>(
    system: &S,
    m: &Monitor,
    seg: &DenseSegment<4>,
    parametrization: Parametrization,
    params: &SpacetimeParams,
    event_tol: f64,
) -> Option<(f64, GeodesicState, f64)> {
    let start = seg.start();
    let at = |t: f64| {
        let y = fixed_step(system, seg.t0, &start, t - seg.t0).unwrap_or_else(|_| seg.eval(t));
        unpack(parametrization, t, &y)
    };
    let end = unpack(parametrization, seg.t1(), &seg.end());
    if m.value(&end, params) > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (seg.t0, seg.t1());
    let mut best = unpack(parametrization, lo, &start);
    let mut g_best = m.value(&best, params);
    while g_best >= event_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = at(mid);
        let g = m.value(&s, params);
        if g > 0.0 {
            lo = mid;
            best = s;
            g_best = g;
        } else {
            hi = mid;
        }
    }
    Some((lo, best, g_best))
}

/// Checks every event on one dense segment and returns the earliest trigger.
/// `system` must be the one whose step produced `seg`.
pub fn detect_events<S: OdeSystem<4>>(
    system: &S,
    seg: &DenseSegment<4>,
    parametrization: Parametrization,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
) -> Option<(f64, Termination)> {
    let parametrization = parametrization.resolve(params);
    let mut first: Option<(f64, Termination)> = None;
    for m in monitors(params, cfg) {
        let Some((t, state, residual)) =
            locate(system, &m, seg, parametrization, params, cfg.event_tol)
        else {
            continue;
        };
        if first.as_ref().is_some_and(|(t_first, _)| *t_first <= t) {
            continue;
        }
        let coincides_with_evaporation = match (m.kind, params.law().evaporation_time()) {
            (TerminationKind::HorizonTouch, Ok(tau_evap)) => {
                Some((state.tau - tau_evap).abs() <= cfg.event_tol.max(1e-3 * tau_evap))
            }
            _ => None,
        };
        first = Some((
            t,
            Termination {
                kind: m.kind,
                state,
                residual,
                coincides_with_evaporation,
            },
        ));
    }
    first
}

struct Recorder<'a> {
    params: &'a SpacetimeParams,
    parametrization: Parametrization,
    output_step: Option<f64>,
    next_grid: u64,
    samples: Vec<Sample>,
}

impl Recorder<'_> {
    fn push(&mut self, s: GeodesicState) {
        self.samples.push(Sample::from_state(s, self.params));
    }

    /// Grid samples strictly before `until`, then the point at `until`.
    fn record(&mut self, seg: &DenseSegment<4>, until: f64, endpoint: GeodesicState) {
        if let Some(step) = self.output_step {
            loop {
                let t = self.next_grid as f64 * step;
                if t >= until {
                    break;
                }
                if t > seg.t0 {
                    let s = unpack(self.parametrization, t, &seg.eval(t));
                    self.push(s);
                }
                self.next_grid += 1;
            }
        }
        self.push(endpoint);
    }
}

/// The ∂τf terms grow like (τ_evap − τ)^(−2/3), so in Schwarzschild time the
/// step size shrinks with the distance to τ_evap until it drops below the
/// float resolution of τ. Such an underflow within `max(event_tol,
/// 1e-12·τ_evap)` of τ_evap is the evaporation itself, not a failure.
fn evaporation_at_resolution(
    e: &Error,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
) -> Option<f64> {
    let Error::StepUnderflow { t, .. } = *e else {
        return None;
    };
    if cfg.parametrization.resolve(params) != Parametrization::CoordinateTime {
        return None;
    }
    let tau_evap = params.law().evaporation_time().ok()?;
    let residual = tau_evap - t;
    (residual >= 0.0 && residual <= cfg.event_tol.max(1e-12 * tau_evap)).then_some(residual)
}

fn run<S: OdeSystem<4>>(
    system: &S,
    t0: f64,
    y0: [f64; 4],
    init: &GeodesicState,
    parametrization: Parametrization,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut stepper = Dopri5::new(system, t0, y0, cfg.step_control())?;
    let mut rec = Recorder {
        params,
        parametrization,
        output_step: cfg.output_step,
        next_grid: 1,
        samples: Vec::new(),
    };
    rec.push(*init);
    loop {
        let seg = match stepper.step() {
            Ok(seg) => seg,
            Err(e) => {
                return match evaporation_at_resolution(&e, params, cfg) {
                    Some(residual) => Ok(Trajectory {
                        termination: Termination {
                            kind: TerminationKind::EvaporationComplete,
                            state: unpack(parametrization, stepper.t(), stepper.y()),
                            residual,
                            coincides_with_evaporation: None,
                        },
                        samples: rec.samples,
                        parametrization,
                        accepted_steps: stepper.accepted_steps(),
                        rejected_steps: stepper.rejected_steps(),
                    }),
                    None => Err(e),
                };
            }
        };
        if let Some((t_event, termination)) =
            detect_events(system, &seg, parametrization, params, cfg)
        {
            if t_event > seg.t0 {
                rec.record(&seg, t_event, termination.state);
            }
            return Ok(Trajectory {
                samples: rec.samples,
                termination,
                parametrization,
                accepted_steps: stepper.accepted_steps(),
                rejected_steps: stepper.rejected_steps(),
            });
        }
        let end = unpack(parametrization, stepper.t(), stepper.y());
        rec.record(&seg, stepper.t(), end);
    }
}

/// Integrates Alice's radial geodesic from `init` until the first event.
///
/// Dormand–Prince 5(4) with PI step control; events (horizon touch,
/// evaporation, radius cutoff, λ/τ budgets) are located by bisection on the
/// dense output. Samples are recorded at every accepted step and, when
/// `cfg.output_step` is set, on a uniform grid of the independent variable.
pub fn integrate_radial(
    init: &GeodesicState,
    params: &SpacetimeParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(init.r > params.radius_at(init.tau)) {
        return Err(Error::CoordinateSingularity {
            r: init.r,
            radius: params.radius_at(init.tau),
        });
    }
    if let Some(r_min) = cfg.effective_r_min(params) {
        if !(init.r > r_min) {
            return Err(Error::InvalidParameter {
                name: "r_min",
                value: r_min,
                reason: "must lie below the initial radius",
            });
        }
    }
    let parametrization = cfg.parametrization.resolve(params);
    match parametrization {
        Parametrization::CoordinateTime => {
            let system = CoordinateTimeSystem {
                params,
                include_dtau_metric_terms: cfg.include_dtau_metric_terms,
            };
            let (t0, y0) = CoordinateTimeSystem::pack(init);
            run(&system, t0, y0, init, parametrization, params, cfg)
        }
        _ => {
            let system = ProperTimeSystem {
                params,
                include_dtau_metric_terms: cfg.include_dtau_metric_terms,
            };
            let (t0, y0) = ProperTimeSystem::pack(init);
            run(&system, t0, y0, init, parametrization, params, cfg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{analytic_cycloid, initial_state_at_rest};

    fn eternal_run(cfg: IntegratorConfig) -> Trajectory {
        let p = SpacetimeParams::eternal(1.0).unwrap();
        let init = initial_state_at_rest(2.0, &p).unwrap();
        integrate_radial(&init, &p, &cfg).unwrap()
    }

    #[test]
    fn eternal_fall_tracks_the_cycloid() {
        let t = eternal_run(IntegratorConfig::default());
        assert_eq!(t.termination.kind, TerminationKind::RMinCutoff);
        let p = SpacetimeParams::eternal(1.0).unwrap();
        let grid: Vec<f64> = t.samples.iter().map(|s| s.state.lambda).collect();
        let oracle = analytic_cycloid(2.0, &p, &grid).unwrap();
        for (num, exact) in t.samples.iter().zip(&oracle.samples) {
            let dev = (num.state.r - exact.state.r).abs() / exact.state.r;
            assert!(dev <= 1e-8, "lambda={} dev={dev}", num.state.lambda);
        }
        assert!(t.last().state.r - 1.0 <= 1.0001e-6);
    }

    #[test]
    fn eternal_energy_is_conserved() {
        let t = eternal_run(IntegratorConfig::default());
        let e0 = t.samples[0].energy;
        for s in &t.samples {
            assert!(((s.energy - e0) / e0).abs() < 1e-9, "{}", s.energy);
            assert!(s.norm_residual.abs() < 1e-9, "{}", s.norm_residual);
        }
    }

    #[test]
    fn monotone_columns_from_rest() {
        let t = eternal_run(IntegratorConfig {
            output_step: Some(0.05),
            ..IntegratorConfig::default()
        });
        for w in t.samples.windows(2) {
            assert!(w[1].state.lambda > w[0].state.lambda);
            assert!(w[1].state.tau > w[0].state.tau);
            assert!(w[1].state.r < w[0].state.r);
        }
        assert!(t.last().state.u0 > 1e3);
    }

    #[test]
    fn output_grid_points_are_present() {
        let t = eternal_run(IntegratorConfig {
            output_step: Some(0.25),
            ..IntegratorConfig::default()
        });
        for n in 1..=14 {
            let target = n as f64 * 0.25;
            assert!(
                t.samples.iter().any(|s| s.state.lambda == target),
                "missing grid point {target}"
            );
        }
    }

    #[test]
    fn lambda_budget_terminates_the_run() {
        let t = eternal_run(IntegratorConfig {
            lambda_max: 1.0,
            ..IntegratorConfig::default()
        });
        assert_eq!(t.termination.kind, TerminationKind::LambdaMax);
        assert!((t.termination.state.lambda - 1.0).abs() <= 1e-12);
        assert!(t.termination.residual.abs() < 1e-12);
    }

    #[test]
    fn tau_budget_terminates_the_run() {
        let t = eternal_run(IntegratorConfig {
            tau_max: 5.0,
            ..IntegratorConfig::default()
        });
        assert_eq!(t.termination.kind, TerminationKind::TauMax);
        assert!((t.termination.state.tau - 5.0).abs() < 1e-12);
    }

    #[test]
    fn eternal_hole_never_reports_a_horizon_touch() {
        let t = eternal_run(IntegratorConfig {
            r_min: Some(1.0 + 1e-9),
            epsilon_horizon: 1e-3,
            ..IntegratorConfig::default()
        });
        assert_eq!(t.termination.kind, TerminationKind::RMinCutoff);
        assert!(t.min_gap() > 0.0);
    }

    #[test]
    fn runs_are_bitwise_deterministic() {
        let a = eternal_run(IntegratorConfig::default());
        let b = eternal_run(IntegratorConfig::default());
        assert_eq!(a.samples.len(), b.samples.len());
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.state.r.to_bits(), y.state.r.to_bits());
            assert_eq!(x.state.tau.to_bits(), y.state.tau.to_bits());
        }
    }

    #[test]
    fn evaporating_hole_is_not_crossed() {
        let p = SpacetimeParams::new(1.0, 1e-3).unwrap();
        let init = initial_state_at_rest(3.0, &p).unwrap();
        let t = integrate_radial(&init, &p, &IntegratorConfig::default()).unwrap();
        let cfg = IntegratorConfig::default();
        assert!(t.min_gap() >= -cfg.event_tol);
        assert!(t.samples.iter().all(|s| s.gap() > 0.0));
        // The quasi-static trajectory trails the shrinking horizon at a gap of
        // order k/(3R), far above ε_horizon·R0, so the run ends at evaporation.
        assert_eq!(t.termination.kind, TerminationKind::EvaporationComplete);
        let tau_evap = p.law().evaporation_time().unwrap();
        assert!((t.termination.state.tau - tau_evap).abs() <= cfg.event_tol);
    }

    #[test]
    fn exact_dtau_terms_reach_evaporation() {
        let p = SpacetimeParams::new(1.0, 1e-3).unwrap();
        let init = initial_state_at_rest(3.0, &p).unwrap();
        let cfg = IntegratorConfig {
            include_dtau_metric_terms: true,
            ..IntegratorConfig::default()
        };
        let t = integrate_radial(&init, &p, &cfg).unwrap();
        assert_eq!(t.termination.kind, TerminationKind::EvaporationComplete);
        assert!(t.termination.residual.abs() <= 1e-12 * 1e3);
        assert!(t.samples.iter().all(|s| s.gap() > 0.0));
    }

    #[test]
    fn proper_time_integration_stalls_for_an_evaporating_hole() {
        let p = SpacetimeParams::new(1.0, 0.01).unwrap();
        let init = initial_state_at_rest(3.0, &p).unwrap();
        let cfg = IntegratorConfig {
            parametrization: Parametrization::ProperTime,
            max_steps: 200_000,
            ..IntegratorConfig::default()
        };
        let err = integrate_radial(&init, &p, &cfg).unwrap_err();
        assert!(err.is_numerical(), "{err:?}");
    }

    #[test]
    fn rejects_bad_starts() {
        let p = SpacetimeParams::eternal(1.0).unwrap();
        let mut init = initial_state_at_rest(2.0, &p).unwrap();
        let cfg = IntegratorConfig {
            r_min: Some(2.5),
            ..IntegratorConfig::default()
        };
        assert!(integrate_radial(&init, &p, &cfg).is_err());
        init.r = 0.5;
        assert!(integrate_radial(&init, &p, &IntegratorConfig::default()).is_err());
    }
}
