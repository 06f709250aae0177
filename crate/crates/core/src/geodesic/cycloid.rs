//! Closed-form free fall from rest in the eternal Schwarzschild geometry:
//!
//! ```text
//! r = (r0/2)(1 + cos η)
//! λ = √(r0³/(4c²R))·(η + sin η),       η ∈ [0, π]
//! ```
//!
//! regular through `r = R`; the singularity is reached at `λ = (π/2)√(r0³/(c²R))`.

use std::f64::consts::PI;

use super::{GeodesicState, Parametrization, Sample, Termination, TerminationKind, Trajectory};
use crate::error::{Error, Result};
use crate::schwarzschild::SpacetimeParams;
use crate::units::C;

fn proper_time_scale(r0: f64, radius: f64) -> f64 {
    (r0 * r0 * r0 / (4.0 * C * C * radius)).sqrt()
}

fn check(r0: f64, radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "Schwarzschild radius must be positive",
        });
    }
    if !(r0 > radius && r0.is_finite()) {
        return Err(Error::CoordinateSingularity { r: r0, radius });
    }
    Ok(())
}

/// Proper time from release to the singularity.
pub fn fall_time_to_singularity(r0: f64, radius: f64) -> f64 {
    0.5 * PI * (r0 * r0 * r0 / (radius * C * C)).sqrt()
}

/// Cycloid parameter η ∈ [0, π] at which the proper time equals `lambda`.
fn eta_at(lambda: f64, scale: f64) -> f64 {
    let target = lambda / scale;
    if target <= 0.0 {
        return 0.0;
    }
    if target >= PI {
        return PI;
    }
    // η + sin η is increasing on [0, π]; Newton safeguarded by bisection.
    let (mut lo, mut hi) = (0.0, PI);
    let mut eta = target / 2.0;
    for _ in 0..200 {
        let g = eta + eta.sin() - target;
        if g > 0.0 {
            hi = eta;
        } else {
            lo = eta;
        }
        let dg = 1.0 + eta.cos();
        let mut next = eta - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - eta).abs() <= 4.0 * f64::EPSILON * eta.max(1.0) {
            return next;
        }
        eta = next;
    }
    eta
}

/// Radius at proper time `lambda` after release from rest at `r0`.
pub fn cycloid_radius_at(r0: f64, radius: f64, lambda: f64) -> f64 {
    let eta = eta_at(lambda, proper_time_scale(r0, radius));
    0.5 * r0 * (1.0 + eta.cos())
}

/// Proper time at which the cycloid passes radius `r` (0 ≤ r ≤ r0).
pub fn cycloid_proper_time_at_radius(r0: f64, radius: f64, r: f64) -> f64 {
    let eta = (2.0 * r / r0 - 1.0).clamp(-1.0, 1.0).acos();
    proper_time_scale(r0, radius) * (eta + eta.sin())
}

/// Schwarzschild time along the cycloid; finite only outside the horizon.
pub fn cycloid_coordinate_time(r0: f64, radius: f64, eta: f64) -> f64 {
    let q = (r0 / radius - 1.0).sqrt();
    let t = (0.5 * eta).tan();
    if t >= q {
        return f64::NAN;
    }
    radius * ((q + t) / (q - t)).ln() / C
        + radius * q * (eta + r0 / (2.0 * radius) * (eta + eta.sin())) / C
}

/// Samples the analytic trajectory at the given proper times (clipped at the singularity).
pub fn analytic_cycloid(
    r0: f64,
    params: &SpacetimeParams,
    lambda_grid: &[f64],
) -> Result<Trajectory> {
    if !params.is_eternal() {
        return Err(Error::NotEternal(params.k()));
    }
    let radius = params.radius0();
    check(r0, radius)?;
    let scale = proper_time_scale(r0, radius);
    let crunch = fall_time_to_singularity(r0, radius);
    let energy = (1.0 - radius / r0).sqrt();

    let mut samples = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let lambda = lambda.clamp(0.0, crunch);
        let eta = eta_at(lambda, scale);
        let r = 0.5 * r0 * (1.0 + eta.cos());
        let outside = r > radius;
        let f = (r - radius) / r;
        let state = GeodesicState {
            lambda,
            tau: if outside {
                cycloid_coordinate_time(r0, radius, eta)
            } else {
                f64::NAN
            },
            r,
            u0: if outside { energy / f } else { f64::NAN },
            ur: -(C * C * radius * (1.0 / r - 1.0 / r0)).max(0.0).sqrt(),
        };
        samples.push(Sample::from_state(state, params));
    }
    let last = samples.last().map(|s| s.state).unwrap_or(GeodesicState {
        lambda: 0.0,
        tau: 0.0,
        r: r0,
        u0: 1.0 / energy,
        ur: 0.0,
    });
    let kind = if last.lambda >= crunch {
        TerminationKind::RMinCutoff
    } else {
        TerminationKind::LambdaMax
    };
    Ok(Trajectory {
        samples,
        termination: Termination {
            kind,
            state: last,
            residual: 0.0,
            coincides_with_evaporation: None,
        },
        parametrization: Parametrization::ProperTime,
        accepted_steps: 0,
        rejected_steps: 0,
    })
}
