use thiserror::Error;

/// Errors raised by the kinematics, geometry and integration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unknown dimension tag `{0}` (expected length, time, mass or acceleration)")]
    UnknownDimension(String),

    #[error("event (ct={ct}, x={x}) is outside the right Rindler wedge")]
    OutsideWedge { ct: f64, x: f64 },

    #[error("chi={0} is on or behind the Rindler horizon")]
    DegenerateHorizon(f64),

    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("r={r} is not outside the Schwarzschild radius R={radius}")]
    CoordinateSingularity { r: f64, radius: f64 },

    #[error("black hole with k=0 never evaporates")]
    EternalBlackHole,

    #[error("tau={tau} is at or past the evaporation time {tau_evap}")]
    PastEvaporation { tau: f64, tau_evap: f64 },

    #[error("analytic cycloid only applies to the eternal black hole (k={0})")]
    NotEternal(f64),

    #[error("step size {h:e} fell below h_min at t={t}")]
    StepUnderflow { t: f64, h: f64 },

    #[error("exceeded {0} integration steps")]
    MaxStepsExceeded(usize),

    #[error("trajectory never reaches the tail Δr/R <= {required:e} (closest {reached:e})")]
    TailNotReached { required: f64, reached: f64 },
}

impl Error {
    /// True for failures of the numerical integration itself.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. } | Error::MaxStepsExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}
