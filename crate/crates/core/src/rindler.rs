//! Uniformly accelerated (Rindler) frame of a fiducial observer ("Rob") and the
//! free fall of an inertial observer ("Alice") who leaves him at τ = 0.
//!
//! Coordinates of the right wedge `x > |ct|`:
//!
//! ```text
//! cτ = (c²/a)·atanh(ct/x)      χ = √(x² − c²t²)
//! ct = χ·sinh(aτ/c)            x = χ·cosh(aτ/c)
//! ```
//!
//! The line element is `ds² = (aχ/c)²·c²dτ² − dχ² − dy² − dz²`; with `c = 1`
//! this is `(aχ)²dτ² − dχ² − dy² − dz²`, which is what [`rindler_interval`]
//! evaluates. Rob stays at `χ = c²/a`.

use crate::error::{ensure_finite, Error, Result};
use crate::spacetime::MinkowskiEvent;
use crate::units::C;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerFrame {
    a: f64,
}

impl RindlerFrame {
    /// Frame of an observer with proper acceleration `a` (geometric units, 1/length).
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "acceleration must be positive and finite",
            });
        }
        Ok(RindlerFrame { a })
    }

    pub fn acceleration(&self) -> f64 {
        self.a
    }

    /// Rob's fixed distance `c²/a` from the horizon.
    pub fn horizon_distance(&self) -> f64 {
        C * C / self.a
    }
}

/// An event in Rob's coordinates. `chi > 0` for every event of the chart.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RindlerEvent {
    pub tau: f64,
    pub chi: f64,
    pub y: f64,
    pub z: f64,
}

impl RindlerEvent {
    pub fn new(tau: f64, chi: f64) -> Self {
        RindlerEvent {
            tau,
            chi,
            y: 0.0,
            z: 0.0,
        }
    }
}

/// Maps an inertial event inside the right wedge to Rindler coordinates.
pub fn minkowski_to_rindler(e: &MinkowskiEvent, f: &RindlerFrame) -> Result<RindlerEvent> {
    ensure_finite("minkowski event", &[e.ct, e.x, e.y, e.z])?;
    let (ct, x) = (e.ct, e.x);
    let abs_ct = ct.abs();
    if !(x > abs_ct) {
        return Err(Error::OutsideWedge { ct, x });
    }
    // atanh(u) = ½ ln((1+u)/(1−u)) with u = ct/x, written through the light-cone
    // coordinates x ± ct so that neither u nor 1 − u is ever rounded.
    let minus = x - abs_ct;
    let plus = x + abs_ct;
    let rapidity = 0.5 * (2.0 * abs_ct / minus).ln_1p();
    let rapidity = rapidity.copysign(ct);
    Ok(RindlerEvent {
        tau: rapidity * C / f.a,
        chi: (minus * plus).sqrt(),
        y: e.y,
        z: e.z,
    })
}

/// Inverse of [`minkowski_to_rindler`].
pub fn rindler_to_minkowski(e: &RindlerEvent, f: &RindlerFrame) -> Result<MinkowskiEvent> {
    ensure_finite("rindler event", &[e.tau, e.chi, e.y, e.z])?;
    if !(e.chi > 0.0) {
        return Err(Error::DegenerateHorizon(e.chi));
    }
    let rapidity = f.a * e.tau / C;
    Ok(MinkowskiEvent {
        ct: e.chi * rapidity.sinh(),
        x: e.chi * rapidity.cosh(),
        y: e.y,
        z: e.z,
    })
}

/// Rob's position at proper time `tau`; a hyperbola `x² − (ct)² = (c²/a)²`.
pub fn rob_worldline(f: &RindlerFrame, tau: f64) -> MinkowskiEvent {
    let d = f.horizon_distance();
    let rapidity = f.a * tau / C;
    MinkowskiEvent::longitudinal(d * rapidity.sinh(), d * rapidity.cosh())
}

/// Alice's distance from the horizon as measured in Rob's frame,
/// `χ(τ) = (c²/a)/cosh(aτ/c)`. Positive for every finite τ.
pub fn alice_chi(f: &RindlerFrame, tau: f64) -> f64 {
    f.horizon_distance() / (f.a * tau / C).cosh()
}

/// Alice's own proper time from departure (ct = 0, x = c²/a) to the
/// crossing of the horizon line ct = x: `c/a`.
pub fn alice_crossing_proper_time(f: &RindlerFrame) -> f64 {
    C / f.a
}

/// Alice's inertial worldline `x = c²/a` at her proper time `t`.
pub fn alice_worldline(f: &RindlerFrame, t: f64) -> MinkowskiEvent {
    MinkowskiEvent::longitudinal(C * t, f.horizon_distance())
}

/// Slope of Rob's plane of simultaneity `ct = tanh(aτ/c)·x` at his time `tau`.
pub fn simultaneity_slope(f: &RindlerFrame, tau: f64) -> f64 {
    (f.a * tau / C).tanh()
}

/// Squared lapse `(aχ/c)²`, the coefficient of `c²dτ²` in the Rindler line element.
pub fn lapse_squared(a: f64, chi: f64) -> f64 {
    let n = a * chi / C;
    n * n
}

/// Line element at `e` for coordinate displacements `(dtau, dchi, dy, dz)`.
pub fn rindler_interval(
    e: &RindlerEvent,
    dtau: f64,
    dchi: f64,
    dy: f64,
    dz: f64,
    f: &RindlerFrame,
) -> Result<f64> {
    ensure_finite("rindler displacement", &[e.chi, dtau, dchi, dy, dz])?;
    if !(e.chi > 0.0) {
        return Err(Error::DegenerateHorizon(e.chi));
    }
    let cdt = C * dtau;
    Ok(lapse_squared(f.a, e.chi) * cdt * cdt - dchi * dchi - dy * dy - dz * dz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{causal_reachable, interval_minkowski};
    use proptest::prelude::*;

    fn unit() -> RindlerFrame {
        RindlerFrame::new(1.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn frame_rejects_bad_acceleration() {
        assert!(RindlerFrame::new(0.0).is_err());
        assert!(RindlerFrame::new(-1.0).is_err());
        assert!(RindlerFrame::new(f64::INFINITY).is_err());
    }

    #[test]
    fn forward_transform_examples() {
        let r = minkowski_to_rindler(&MinkowskiEvent::longitudinal(0.0, 1.0), &unit()).unwrap();
        assert_eq!((r.tau, r.chi), (0.0, 1.0));

        let e = MinkowskiEvent::longitudinal(1f64.sinh(), 1f64.cosh());
        let r = minkowski_to_rindler(&e, &unit()).unwrap();
        assert!(
            close(r.tau, 1.0, 1e-14) && close(r.chi, 1.0, 1e-14),
            "{r:?}"
        );

        assert_eq!(
            minkowski_to_rindler(&MinkowskiEvent::longitudinal(1.0, 0.5), &unit()),
            Err(Error::OutsideWedge { ct: 1.0, x: 0.5 })
        );
        // on the horizon itself
        assert!(minkowski_to_rindler(&MinkowskiEvent::longitudinal(2.0, 2.0), &unit()).is_err());
    }

    #[test]
    fn inverse_transform_examples() {
        let m = rindler_to_minkowski(&RindlerEvent::new(0.0, 1.0), &unit()).unwrap();
        assert_eq!((m.ct, m.x), (0.0, 1.0));
        let m = rindler_to_minkowski(&RindlerEvent::new(1.0, 1.0), &unit()).unwrap();
        assert!(close(m.ct, 1.175_201_193_643_801_4, 1e-15));
        assert!(close(m.x, 1.543_080_634_815_243_7, 1e-15));
        assert_eq!(
            rindler_to_minkowski(&RindlerEvent::new(2.0, 0.0), &unit()),
            Err(Error::DegenerateHorizon(0.0))
        );
    }

    #[test]
    fn rob_worldline_examples() {
        let p = rob_worldline(&unit(), 0.0);
        assert_eq!((p.ct, p.x), (0.0, 1.0));
        let p = rob_worldline(&unit(), 1.0);
        assert!(close(p.ct, 1f64.sinh(), 1e-15) && close(p.x, 1f64.cosh(), 1e-15));
        let p = rob_worldline(&RindlerFrame::new(2.0).unwrap(), 0.0);
        assert_eq!((p.ct, p.x), (0.0, 0.5));
    }

    #[test]
    fn alice_examples() {
        let f = unit();
        assert_eq!(alice_chi(&f, 0.0), 1.0);
        assert!(close(alice_chi(&f, 1.0), 0.648_054_273_663_885_4, 1e-14));
        assert!(close(alice_chi(&f, 10.0), 9.079_985_933_781_724e-5, 1e-12));
        assert_eq!(alice_crossing_proper_time(&f), 1.0);
        assert_eq!(
            alice_crossing_proper_time(&RindlerFrame::new(2.0).unwrap()),
            0.5
        );
        assert_eq!(
            alice_crossing_proper_time(&RindlerFrame::new(10.0).unwrap()),
            0.1
        );
    }

    #[test]
    fn alice_approach_is_monotone_and_never_reaches_zero() {
        let f = unit();
        let mut prev = alice_chi(&f, 0.0);
        for i in 1..=700 {
            let chi = alice_chi(&f, i as f64);
            assert!(chi > 0.0, "tau={i}");
            assert!(chi < prev);
            prev = chi;
        }
    }

    #[test]
    fn simultaneity_examples() {
        let f = unit();
        assert_eq!(simultaneity_slope(&f, 0.0), 0.0);
        assert!(close(
            simultaneity_slope(&f, 1.0),
            0.761_594_155_955_764_9,
            1e-15
        ));
        let s5 = simultaneity_slope(&f, 5.0);
        assert!((s5 - 0.99991).abs() < 1e-5 && s5 < 1.0);
    }

    #[test]
    fn rob_plane_of_simultaneity_passes_through_rob() {
        for a in [0.5, 1.0, 3.0] {
            let f = RindlerFrame::new(a).unwrap();
            for tau in [-2.0, -0.1, 0.0, 0.7, 2.5] {
                let p = rob_worldline(&f, tau);
                assert!((p.ct - simultaneity_slope(&f, tau) * p.x).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn interval_examples() {
        let f = unit();
        let e = RindlerEvent::new(0.0, 1.0);
        assert_eq!(rindler_interval(&e, 1.0, 0.0, 0.0, 0.0, &f).unwrap(), 1.0);
        assert!(close(
            rindler_interval(&e, 0.0, 0.3, 0.0, 0.0, &f).unwrap(),
            -0.09,
            1e-15
        ));
        let e = RindlerEvent::new(0.0, 0.7);
        let dtau = 0.2;
        let null = rindler_interval(&e, dtau, 1.0 * 0.7 * dtau, 0.0, 0.0, &f).unwrap();
        assert!(null.abs() < 1e-17, "{null}");
        assert!(rindler_interval(&RindlerEvent::new(0.0, 0.0), 1.0, 0.0, 0.0, 0.0, &f).is_err());
    }

    #[test]
    fn metric_agrees_with_minkowski_at_third_order() {
        let f = RindlerFrame::new(1.3).unwrap();
        let base = RindlerEvent::new(0.4, 0.8);
        let (dir_tau, dir_chi) = (1.0, -0.35);
        let discrepancy = |eps: f64| {
            let next = RindlerEvent::new(base.tau + eps * dir_tau, base.chi + eps * dir_chi);
            let a = rindler_to_minkowski(&base, &f).unwrap();
            let b = rindler_to_minkowski(&next, &f).unwrap();
            let exact = interval_minkowski(&a, &b).unwrap().ds2;
            let local =
                rindler_interval(&base, eps * dir_tau, eps * dir_chi, 0.0, 0.0, &f).unwrap();
            (exact - local).abs()
        };
        let mut prev = discrepancy(2e-2);
        for k in 1..4 {
            let eps = 2e-2 / f64::from(1 << k);
            let d = discrepancy(eps);
            assert!(prev / d >= 7.0, "eps={eps}: ratio {}", prev / d);
            prev = d;
        }
    }

    #[test]
    fn rob_worldline_is_proper_time_parametrized() {
        let f = RindlerFrame::new(0.8).unwrap();
        for tau in [-1.0, 0.0, 0.5, 2.0] {
            let mut prev_err = f64::NAN;
            for k in 0..4 {
                let dtau = 1e-2 / f64::from(1 << k);
                let a = rob_worldline(&f, tau);
                let b = rob_worldline(&f, tau + dtau);
                let ds2 = interval_minkowski(&a, &b).unwrap().ds2;
                let err = (ds2 - dtau * dtau).abs();
                assert!(
                    err <= 1e-12 + dtau.powi(4),
                    "tau={tau} dtau={dtau} err={err}"
                );
                if prev_err.is_finite() && err > 1e-15 {
                    assert!(prev_err / err > 10.0);
                }
                prev_err = err;
            }
        }
    }

    #[test]
    fn signal_into_the_cloaked_region_is_one_way() {
        let f = unit();
        // Alice beyond the horizon: x = c²/a, ct > c²/a
        for ct in [1.05, 1.5, 3.0] {
            let alice = MinkowskiEvent::longitudinal(ct, 1.0);
            assert!(minkowski_to_rindler(&alice, &f).is_err());
            assert!(causal_reachable(&rob_worldline(&f, 0.0), &alice).unwrap());
            for i in 0..=1000 {
                let rob = rob_worldline(&f, i as f64 * 0.01);
                assert!(!causal_reachable(&alice, &rob).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip_inside_the_wedge(
            ct in -1.0e3..1.0e3f64,
            frac in 0.0..1.0f64,
            a in 0.01..100.0f64,
        ) {
            let lo = ct.abs() + 1e-6;
            let x = lo + frac * (1.0e3 - lo);
            prop_assume!(x > ct.abs());
            let f = RindlerFrame::new(a).unwrap();
            let e = MinkowskiEvent::longitudinal(ct, x);
            let back = rindler_to_minkowski(&minkowski_to_rindler(&e, &f).unwrap(), &f).unwrap();
            prop_assert!((back.ct - ct).abs() <= 1e-12 * ct.abs().max(f64::MIN_POSITIVE), "{} vs {}", back.ct, ct);
            prop_assert!((back.x - x).abs() <= 1e-12 * x);
        }

        #[test]
        fn mapped_alice_matches_closed_form(tau in 0.0..10.0f64, a in 0.1..1.5f64) {
            let f = RindlerFrame::new(a).unwrap();
            let e = MinkowskiEvent::longitudinal(f.horizon_distance() * (a * tau).tanh(), f.horizon_distance());
            let r = minkowski_to_rindler(&e, &f).unwrap();
            prop_assert!((r.chi - alice_chi(&f, r.tau)).abs() < 1e-12 * f.horizon_distance());
        }
    }
}
