//! Flat-spacetime events, the Minkowski interval and causal classification.
//!
//! Signature is (+,−,−,−): `ds² = (Δct)² − Δx² − Δy² − Δz²`.

use crate::error::{ensure_finite, Result};

/// Relative tolerance, in units of the summed squared components, under which
/// an interval counts as null.
const NULL_TOLERANCE: f64 = 4.0 * f64::EPSILON;

/// A point of Minkowski spacetime in inertial coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkowskiEvent {
    pub ct: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl MinkowskiEvent {
    pub const ORIGIN: MinkowskiEvent = MinkowskiEvent {
        ct: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(ct: f64, x: f64, y: f64, z: f64) -> Self {
        MinkowskiEvent { ct, x, y, z }
    }

    /// Event in the (ct, x) plane with vanishing transverse coordinates.
    pub fn longitudinal(ct: f64, x: f64) -> Self {
        MinkowskiEvent::new(ct, x, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.ct.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn translated(&self, by: &MinkowskiEvent) -> Self {
        MinkowskiEvent::new(self.ct + by.ct, self.x + by.x, self.y + by.y, self.z + by.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    TimelikeFuture,
    TimelikePast,
    Lightlike,
    Spacelike,
    Zero,
}

/// Squared interval between two events together with its causal class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub ds2: f64,
    pub class: CausalClass,
    /// Time-coordinate separation `Δct` (sign fixes the time orientation).
    pub dct: f64,
}

impl Interval {
    pub fn is_future_directed(&self) -> bool {
        self.dct > 0.0
    }
}

/// Interval from `a` to `b`.
pub fn interval_minkowski(a: &MinkowskiEvent, b: &MinkowskiEvent) -> Result<Interval> {
    ensure_finite(
        "minkowski event",
        &[a.ct, a.x, a.y, a.z, b.ct, b.x, b.y, b.z],
    )?;
    let dct = b.ct - a.ct;
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let dz = b.z - a.z;
    let time = dct * dct;
    let space = dx * dx + dy * dy + dz * dz;
    let ds2 = time - space;

    let class = if a == b {
        CausalClass::Zero
    } else if ds2.abs() <= NULL_TOLERANCE * (time + space) {
        CausalClass::Lightlike
    } else if ds2 > 0.0 {
        if dct > 0.0 {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        }
    } else {
        CausalClass::Spacelike
    };
    Ok(Interval { ds2, class, dct })
}

/// Whether a signal travelling no faster than light can go from `from` to `to`.
pub fn causal_reachable(from: &MinkowskiEvent, to: &MinkowskiEvent) -> Result<bool> {
    let iv = interval_minkowski(from, to)?;
    Ok(match iv.class {
        CausalClass::TimelikeFuture => true,
        CausalClass::Lightlike => iv.dct > 0.0,
        _ => false,
    })
}
