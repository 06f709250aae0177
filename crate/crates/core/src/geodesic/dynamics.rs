//! Geodesic equations for `ds² = f(τ,r)c²dτ² − dr²/f(τ,r)` with
//! `f = 1 − R(τ)/r`.
//!
//! The quasi-static model keeps only `f' = ∂f/∂r = R/r²`, with `R` read off the
//! evaporation law at the current τ. The optional `∂f/∂τ = −Ṙ/r` terms make the
//! equations the exact geodesics of the time-dependent metric.

use super::GeodesicState;
use crate::error::{Error, Result};
use crate::integrator::OdeSystem;
use crate::schwarzschild::SpacetimeParams;
use crate::units::C;

/// Derivatives with respect to Alice's proper time λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicDerivatives {
    pub dtau: f64,
    pub dr: f64,
    pub du0: f64,
    pub dur: f64,
}

/// Metric functions at (τ, r): lapse f, ∂f/∂r and ∂f/∂τ (zero unless requested).
#[derive(Debug, Clone, Copy)]
struct Lapse {
    f: f64,
    df_dr: f64,
    df_dtau: f64,
}

fn lapse(tau: f64, r: f64, params: &SpacetimeParams, dtau_terms: bool) -> Result<Lapse> {
    let radius = params.radius_at(tau);
    let f = (r - radius) / r;
    if !(f > 0.0) || !r.is_finite() {
        return Err(Error::CoordinateSingularity { r, radius });
    }
    let df_dtau = if dtau_terms {
        -params.law().radius_rate(tau) / r
    } else {
        0.0
    };
    Ok(Lapse {
        f,
        df_dr: radius / (r * r),
        df_dtau,
    })
}

/// Alice at radius `r0` with radial velocity `ur = dr/dλ`, normalized so that
/// `f c²u0² − ur²/f = c²`.
pub fn initial_state(r0: f64, ur: f64, params: &SpacetimeParams) -> Result<GeodesicState> {
    let radius = params.radius0();
    if !(r0.is_finite() && r0 > radius) {
        return Err(Error::CoordinateSingularity { r: r0, radius });
    }
    if !ur.is_finite() {
        return Err(Error::NonFinite("initial ur"));
    }
    let f = (r0 - radius) / r0;
    let u0 = ((1.0 + ur * ur / (f * C * C)) / f).sqrt();
    Ok(GeodesicState {
        lambda: 0.0,
        tau: 0.0,
        r: r0,
        u0,
        ur,
    })
}

/// Alice released from rest at `r0`.
pub fn initial_state_at_rest(r0: f64, params: &SpacetimeParams) -> Result<GeodesicState> {
    initial_state(r0, 0.0, params)
}

/// Right-hand side of the radial geodesic equations in proper time.
pub fn geodesic_rhs(
    state: &GeodesicState,
    params: &SpacetimeParams,
    include_dtau_metric_terms: bool,
) -> Result<GeodesicDerivatives> {
    let Lapse { f, df_dr, df_dtau } = lapse(state.tau, state.r, params, include_dtau_metric_terms)?;
    let (u0, ur) = (state.u0, state.ur);
    let mut du0 = -(df_dr / f) * u0 * ur;
    let mut dur = -(C * C * f * df_dr / 2.0) * u0 * u0 + (df_dr / (2.0 * f)) * ur * ur;
    if df_dtau != 0.0 {
        du0 += -df_dtau / (2.0 * f) * u0 * u0 + df_dtau / (2.0 * C * C * f * f * f) * ur * ur;
        dur += (df_dtau / f) * u0 * ur;
    }
    Ok(GeodesicDerivatives {
        dtau: u0,
        dr: ur,
        du0,
        dur,
    })
}

/// Integration in proper time; state `[τ, r, u0, ur]`.
pub struct ProperTimeSystem<'a> {
    pub params: &'a SpacetimeParams,
    pub include_dtau_metric_terms: bool,
}

impl ProperTimeSystem<'_> {
    pub fn pack(state: &GeodesicState) -> (f64, [f64; 4]) {
        (state.lambda, [state.tau, state.r, state.u0, state.ur])
    }

    pub fn unpack(lambda: f64, y: &[f64; 4]) -> GeodesicState {
        GeodesicState {
            lambda,
            tau: y[0],
            r: y[1],
            u0: y[2],
            ur: y[3],
        }
    }
}

impl OdeSystem<4> for ProperTimeSystem<'_> {
    fn rhs(&self, lambda: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
        let state = Self::unpack(lambda, y);
        let d = geodesic_rhs(&state, self.params, self.include_dtau_metric_terms)?;
        Ok([d.dtau, d.dr, d.du0, d.dur])
    }
}

/// Integration in Schwarzschild time; state `[λ, r, w, v]` with
/// `w = dλ/dτ = 1/u0` and `v = dr/dτ`. Regular where u0 diverges at finite λ.
pub struct CoordinateTimeSystem<'a> {
    pub params: &'a SpacetimeParams,
    pub include_dtau_metric_terms: bool,
}

impl CoordinateTimeSystem<'_> {
    pub fn pack(state: &GeodesicState) -> (f64, [f64; 4]) {
        let w = 1.0 / state.u0;
        (state.tau, [state.lambda, state.r, w, state.ur * w])
    }

    pub fn unpack(tau: f64, y: &[f64; 4]) -> GeodesicState {
        let u0 = 1.0 / y[2];
        GeodesicState {
            lambda: y[0],
            tau,
            r: y[1],
            u0,
            ur: y[3] * u0,
        }
    }
}

impl OdeSystem<4> for CoordinateTimeSystem<'_> {
    fn rhs(&self, tau: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
        let [_, r, w, v] = *y;
        if !(w >= 0.0) {
            return Err(Error::NonFinite("dλ/dτ"));
        }
        let Lapse { f, df_dr, df_dtau } =
            lapse(tau, r, self.params, self.include_dtau_metric_terms)?;
        // du0/dλ = u0²·a and dur/dλ = u0²·b, written per unit u0² so nothing overflows.
        let mut a = -(df_dr / f) * v;
        let mut b = -(C * C * f * df_dr / 2.0) + (df_dr / (2.0 * f)) * v * v;
        if df_dtau != 0.0 {
            a += -df_dtau / (2.0 * f) + df_dtau / (2.0 * C * C * f * f * f) * v * v;
            b += (df_dtau / f) * v;
        }
        Ok([w, v, -w * a, b - v * a])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eternal(radius: f64) -> SpacetimeParams {
        SpacetimeParams::eternal(radius).unwrap()
    }

    #[test]
    fn rest_state_examples() {
        let s = initial_state_at_rest(2.0, &eternal(1.0)).unwrap();
        assert!((s.u0 - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!((s.lambda, s.tau, s.r, s.ur), (0.0, 0.0, 2.0, 0.0));
        let far = initial_state_at_rest(1e6, &eternal(1.0)).unwrap();
        assert!((far.u0 - 1.0).abs() < 1e-6);
        assert!(initial_state_at_rest(1.0, &eternal(1.0)).is_err());
    }

    #[test]
    fn moving_initial_state_is_normalized() {
        let p = eternal(1.0);
        let s = initial_state(3.0, -0.4, &p).unwrap();
        let f = 1.0 - 1.0 / 3.0;
        assert!((f * s.u0 * s.u0 - s.ur * s.ur / f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rest_acceleration_is_newtonian_form() {
        let p = eternal(1.0);
        for r0 in [1.5, 2.0, 7.0] {
            let s = initial_state_at_rest(r0, &p).unwrap();
            let d = geodesic_rhs(&s, &p, false).unwrap();
            assert!((d.dur + 1.0 / (2.0 * r0 * r0)).abs() < 1e-15, "r0={r0}");
            assert_eq!(d.du0, 0.0);
        }
    }

    #[test]
    fn flat_far_field() {
        let p = eternal(1.0);
        let s = GeodesicState {
            lambda: 0.0,
            tau: 0.0,
            r: 1e12,
            u0: 1.1,
            ur: -0.4,
        };
        let d = geodesic_rhs(&s, &p, false).unwrap();
        assert!(d.du0.abs() < 1e-23 && d.dur.abs() < 1e-23);
        assert_eq!((d.dtau, d.dr), (1.1, -0.4));
    }

    #[test]
    fn zero_k_matches_static_equations_bitwise() {
        let p = eternal(1.0);
        let s = GeodesicState {
            lambda: 0.3,
            tau: 4.0,
            r: 1.7,
            u0: 1.9,
            ur: -0.8,
        };
        let a = geodesic_rhs(&s, &p, false).unwrap();
        let b = geodesic_rhs(&s, &p, true).unwrap();
        assert_eq!(a, b);
        // hand-written static Schwarzschild equations
        let (f, fp) = (1.0 - 1.0 / 1.7, 1.0 / (1.7 * 1.7));
        assert_eq!(a.du0, -(fp / f) * 1.9 * -0.8);
        assert_eq!(
            a.dur,
            -(f * fp / 2.0) * 1.9 * 1.9 + (fp / (2.0 * f)) * 0.8 * 0.8
        );
    }

    #[test]
    fn inside_horizon_is_rejected() {
        let p = eternal(1.0);
        let s = GeodesicState {
            lambda: 0.0,
            tau: 0.0,
            r: 0.9,
            u0: 1.0,
            ur: -1.0,
        };
        assert!(geodesic_rhs(&s, &p, false).is_err());
    }

    #[test]
    fn coordinate_time_system_is_the_chain_rule_of_the_proper_time_one() {
        for (k, full) in [(0.0, false), (0.01, false), (0.01, true)] {
            let p = SpacetimeParams::new(1.0, k).unwrap();
            let s = GeodesicState {
                lambda: 1.2,
                tau: 12.0,
                r: 1.4,
                u0: 2.5,
                ur: -0.7,
            };
            let proper = ProperTimeSystem {
                params: &p,
                include_dtau_metric_terms: full,
            };
            let coord = CoordinateTimeSystem {
                params: &p,
                include_dtau_metric_terms: full,
            };
            let (l, y) = ProperTimeSystem::pack(&s);
            let dl = proper.rhs(l, &y).unwrap();
            let (t, z) = CoordinateTimeSystem::pack(&s);
            let dt = coord.rhs(t, &z).unwrap();
            let w = 1.0 / s.u0;
            let expected = [
                w,
                s.ur * w,
                -dl[2] * w * w * w,
                (dl[3] * s.u0 - s.ur * dl[2]) * w * w * w,
            ];
            for i in 0..4 {
                assert!(
                    (dt[i] - expected[i]).abs() < 1e-14,
                    "k={k} i={i}: {} vs {}",
                    dt[i],
                    expected[i]
                );
            }
            let back = CoordinateTimeSystem::unpack(t, &z);
            assert!((back.u0 - s.u0).abs() < 1e-15 && (back.ur - s.ur).abs() < 1e-15);
        }
    }

    #[test]
    fn dtau_terms_preserve_normalization_to_first_order() {
        // d/dλ (g_μν u^μ u^ν) = 0 for the full geodesic equations.
        let p = SpacetimeParams::new(1.0, 0.05).unwrap();
        let s = initial_state(2.5, -0.3, &p).unwrap();
        let s = GeodesicState { tau: 3.0, ..s };
        let d = geodesic_rhs(&s, &p, true).unwrap();
        let radius = p.radius_at(s.tau);
        let f = 1.0 - radius / s.r;
        let fp = radius / (s.r * s.r);
        let fdot = -p.law().radius_rate(s.tau) / s.r;
        let df = fp * s.ur + fdot * s.u0;
        let dnorm = df * s.u0 * s.u0 + 2.0 * f * s.u0 * d.du0 + df * s.ur * s.ur / (f * f)
            - 2.0 * s.ur * d.dur / f;
        assert!(dnorm.abs() < 1e-14, "{dnorm}");
        // the quasi-static equations drift at rate ḟ·u0·(u0² + ur²/f²)
        let q = geodesic_rhs(&s, &p, false).unwrap();
        let dq = df * s.u0 * s.u0 + 2.0 * f * s.u0 * q.du0 + df * s.ur * s.ur / (f * f)
            - 2.0 * s.ur * q.dur / f;
        let predicted = fdot * s.u0 * (s.u0 * s.u0 + s.ur * s.ur / (f * f));
        assert!(
            (dq - predicted).abs() < 1e-14 * predicted.abs().max(1.0),
            "{dq} vs {predicted}"
        );
    }
}
