//! Unit conventions.
//!
//! Everything inside the crate runs in geometric units with `c = G = 1`:
//! lengths in metres, times expressed as `c·t` (metres), masses as `G·m/c²`
//! (metres) and accelerations as `a/c²` (1/metre). SI values only appear at
//! the I/O boundary through [`convert_units`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Physical constants of a unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Speed of light.
    pub c: f64,
    /// Newton's gravitational constant.
    pub g: f64,
}

impl Constants {
    /// Geometric units used for all internal computation.
    pub const GEOMETRIC: Constants = Constants { c: 1.0, g: 1.0 };

    /// SI values (CODATA 2018 for G; c is exact by definition).
    pub const SI: Constants = Constants {
        c: 299_792_458.0,
        g: 6.674_30e-11,
    };
}

/// Speed of light in geometric units.
pub const C: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Length,
    Time,
    Mass,
    Acceleration,
}

impl Dimension {
    /// Multiplier taking an SI value into geometric units.
    pub fn si_to_geometric_factor(self) -> f64 {
        let Constants { c, g } = Constants::SI;
        match self {
            Dimension::Length => 1.0,
            Dimension::Time => c,
            Dimension::Mass => g / (c * c),
            Dimension::Acceleration => 1.0 / (c * c),
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "length" => Ok(Dimension::Length),
            "time" => Ok(Dimension::Time),
            "mass" => Ok(Dimension::Mass),
            "acceleration" => Ok(Dimension::Acceleration),
            _ => Err(Error::UnknownDimension(s.to_string())),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Mass => "mass",
            Dimension::Acceleration => "acceleration",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    SiToGeometric,
    GeometricToSi,
}

/// Converts `value` of the given dimension between SI and geometric units.
pub fn convert_units(value: f64, dimension: Dimension, direction: Direction) -> f64 {
    let factor = dimension.si_to_geometric_factor();
    match direction {
        Direction::SiToGeometric => value * factor,
        Direction::GeometricToSi => value / factor,
    }
}

/// String-tagged variant of [`convert_units`] for callers holding a dimension name.
pub fn convert_units_tagged(value: f64, dimension: &str, direction: Direction) -> Result<f64> {
    let dimension: Dimension = dimension.parse()?;
    Ok(convert_units(value, dimension, direction))
}
