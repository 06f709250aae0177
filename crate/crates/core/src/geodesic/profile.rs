use super::Trajectory;
use crate::error::{Error, Result};

/// Default tail window in Δr/R used for the slope fit.
pub const DEFAULT_TAIL_WINDOW: (f64, f64) = (1e-5, 1e-3);

/// Schwarzschild time against ln(Δr/R) over the tail of an infall, with the
/// least-squares slope; approaches −R/c as Alice hovers above the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeProfile {
    pub log_delta_r: Vec<f64>,
    pub tau: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// Extracts `(ln(Δr/R), τ)` for samples with `Δr/R` inside `window` and fits
/// a straight line through them.
pub fn coordinate_time_profile(
    traj: &Trajectory,
    radius: f64,
    window: (f64, f64),
) -> Result<TimeProfile> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "window",
            value: lo,
            reason: "tail window must satisfy 0 < lo < hi",
        });
    }
    let closest = traj
        .samples
        .iter()
        .map(|s| (s.state.r - radius) / radius)
        .filter(|x| x.is_finite())
        .fold(f64::INFINITY, f64::min);
    if closest > lo {
        return Err(Error::TailNotReached {
            required: lo,
            reached: closest,
        });
    }

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for s in &traj.samples {
        let rel = (s.state.r - radius) / radius;
        if rel >= lo && rel <= hi && s.state.tau.is_finite() {
            xs.push(rel.ln());
            ys.push(s.state.tau);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "output_step",
            value: xs.len() as f64,
            reason: "fewer than three samples inside the tail window",
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    Ok(TimeProfile {
        log_delta_r: xs,
        tau: ys,
        slope,
        intercept: my - slope * mx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{initial_state_at_rest, integrate_radial, IntegratorConfig};
    use crate::schwarzschild::SpacetimeParams;

    fn tail_slope(radius: f64) -> f64 {
        let p = SpacetimeParams::eternal(radius).unwrap();
        let init = initial_state_at_rest(2.0 * radius, &p).unwrap();
        let cfg = IntegratorConfig {
            output_step: Some(1e-5 * radius),
            ..IntegratorConfig::default()
        };
        let traj = integrate_radial(&init, &p, &cfg).unwrap();
        assert!(traj.samples.iter().all(|s| s.state.r > radius));
        coordinate_time_profile(&traj, radius, DEFAULT_TAIL_WINDOW)
            .unwrap()
            .slope
    }

    #[test]
    fn slope_approaches_minus_radius() {
        assert!((tail_slope(1.0) + 1.0).abs() < 1e-2);
        assert!((tail_slope(2.0) + 2.0).abs() < 2e-2);
    }

    #[test]
    fn short_runs_do_not_reach_the_tail() {
        let p = SpacetimeParams::eternal(1.0).unwrap();
        let init = initial_state_at_rest(2.0, &p).unwrap();
        let cfg = IntegratorConfig {
            lambda_max: 1.0,
            ..IntegratorConfig::default()
        };
        let traj = integrate_radial(&init, &p, &cfg).unwrap();
        assert!(matches!(
            coordinate_time_profile(&traj, 1.0, DEFAULT_TAIL_WINDOW),
            Err(Error::TailNotReached { .. })
        ));
    }
}
