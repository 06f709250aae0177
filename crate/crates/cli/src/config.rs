//! Scenario configuration: a JSON document overlaid by command-line flags.
//!
//! Precedence is defaults < config file < flags. `k` and `tau_evap` describe
//! the same setting, so either one given as a flag replaces both file values.
//! With `units = "si"` every dimensional input is read in SI and converted to
//! geometric units here; the scenarios only ever see geometric values.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use horizonlab_core::units::{convert_units, Constants, Dimension, Direction};
use horizonlab_core::{calibrate_k, Error as CoreError, IntegratorConfig, Parametrization};
use serde::Deserialize;

use crate::table::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fig1,
    Infall,
    Transform,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Fig1 => "fig1",
            Mode::Infall => "infall",
            Mode::Transform => "transform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Eternal,
    Evaporating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Geometric,
    Si,
}

impl UnitSystem {
    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::Geometric => "geometric",
            UnitSystem::Si => "si",
        }
    }

    /// SI value → geometric value.
    pub fn to_geometric(self, value: f64, dim: Dimension) -> f64 {
        match self {
            UnitSystem::Geometric => value,
            UnitSystem::Si => convert_units(value, dim, Direction::SiToGeometric),
        }
    }

    /// Geometric value → value in this system.
    pub fn from_geometric(self, value: f64, dim: Dimension) -> f64 {
        match self {
            UnitSystem::Geometric => value,
            UnitSystem::Si => convert_units(value, dim, Direction::GeometricToSi),
        }
    }

    /// Speed of light in this system; converts dimensionless velocities.
    pub fn c(self) -> f64 {
        match self {
            UnitSystem::Geometric => Constants::GEOMETRIC.c,
            UnitSystem::Si => Constants::SI.c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformDirection {
    #[default]
    ToRindler,
    ToMinkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ParametrizationChoice {
    #[default]
    Auto,
    ProperTime,
    CoordinateTime,
}

impl From<ParametrizationChoice> for Parametrization {
    fn from(p: ParametrizationChoice) -> Self {
        match p {
            ParametrizationChoice::Auto => Parametrization::Auto,
            ParametrizationChoice::ProperTime => Parametrization::ProperTime,
            ParametrizationChoice::CoordinateTime => Parametrization::CoordinateTime,
        }
    }
}

/// A configuration problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Settings shared by the config file and the flags; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Scenario mode (file only; must agree with the command).
    #[arg(skip)]
    pub mode: Option<Mode>,
    /// Eternal or evaporating hole (inferred from k / tau_evap when absent).
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,

    /// Rob's proper acceleration.
    #[arg(long)]
    pub a: Option<f64>,
    /// Rob's proper-time range for fig1, as two numbers.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    pub tau_range: Option<Vec<f64>>,
    /// Rob proper time of the simultaneity line in fig1.
    #[arg(long, allow_negative_numbers = true)]
    pub simultaneity_tau: Option<f64>,
    /// Rob proper time at which fig1's signal ray is emitted.
    #[arg(long, allow_negative_numbers = true)]
    pub signal_tau: Option<f64>,

    /// Initial Schwarzschild radius.
    #[arg(long = "R0")]
    #[serde(rename = "R0")]
    pub radius0: Option<f64>,
    /// Evaporation rate in R(τ)³ = R0³ − kτ.
    #[arg(long, conflicts_with = "tau_evap")]
    pub k: Option<f64>,
    /// Evaporation time; sets k = R0³/tau_evap.
    #[arg(long)]
    pub tau_evap: Option<f64>,
    /// Alice's release radius (default 2·R0).
    #[arg(long)]
    pub r0: Option<f64>,
    /// Alice's initial dr/dλ (default 0, at rest).
    #[arg(long, allow_negative_numbers = true)]
    pub ur0: Option<f64>,

    /// Relative error tolerance per step.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute error tolerance per step.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// First trial step.
    #[arg(long)]
    pub h_init: Option<f64>,
    /// Smallest step before the run is declared a numerical failure.
    #[arg(long)]
    pub h_min: Option<f64>,
    /// Largest step (default: the larger of 1 and a hundredth of the run span).
    #[arg(long)]
    pub h_max: Option<f64>,
    /// Step budget (accepted plus rejected).
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Horizon cutoff as a fraction of R0.
    #[arg(long)]
    pub epsilon_horizon: Option<f64>,
    /// Tolerance on the sign function at a located event.
    #[arg(long)]
    pub event_tol: Option<f64>,
    /// Proper-time budget.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Schwarzschild-time budget.
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Radius cutoff (default R0·(1 + epsilon_horizon) for an eternal hole).
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Independent variable: proper time for eternal holes, Schwarzschild time otherwise.
    #[arg(long, value_enum)]
    pub parametrization: Option<ParametrizationChoice>,
    /// Keep the ∂f/∂τ terms of the geodesic equations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub include_dtau_metric_terms: Option<bool>,

    /// Number of rows of the uniform output grid.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output format: csv or json.
    #[arg(long, value_parser = parse_format)]
    #[serde(default, deserialize_with = "deserialize_format")]
    pub format: Option<Format>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Unit system of all inputs and outputs.
    #[arg(long, value_enum)]
    pub units: Option<UnitSystem>,
    /// Direction of the transform command.
    #[arg(long, value_enum)]
    pub direction: Option<TransformDirection>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn deserialize_format<'de, D>(d: D) -> Result<Option<Format>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Settings, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field") || msg.starts_with("missing field"))
                .unwrap_or("config");
            ConfigError::new(field, msg.clone())
        })
    }

    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Settings::from_json(&text)
    }

    /// `self` overridden by every field present in `top`.
    pub fn overlaid(mut self, top: Settings) -> Settings {
        if top.k.is_some() || top.tau_evap.is_some() {
            self.k = top.k;
            self.tau_evap = top.tau_evap;
        }
        overlay!(self, top;
            mode, variant, a, tau_range, simultaneity_tau, signal_tau, radius0, r0, ur0,
            rel_tol, abs_tol, h_init, h_min, h_max, max_steps, epsilon_horizon, event_tol,
            lambda_max, tau_max, r_min, parametrization, include_dtau_metric_terms,
            samples, format, out, units, direction,
        );
        self
    }

    /// Names of the fields that are set.
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! check {
            ($($field:ident => $name:literal),* $(,)?) => {
                $( if self.$field.is_some() { out.push($name); } )*
            };
        }
        check!(
            variant => "variant", a => "a", tau_range => "tau_range",
            simultaneity_tau => "simultaneity_tau", signal_tau => "signal_tau",
            radius0 => "R0", k => "k", tau_evap => "tau_evap", r0 => "r0", ur0 => "ur0",
            rel_tol => "rel_tol", abs_tol => "abs_tol", h_init => "h_init", h_min => "h_min",
            h_max => "h_max", max_steps => "max_steps", epsilon_horizon => "epsilon_horizon",
            event_tol => "event_tol", lambda_max => "lambda_max", tau_max => "tau_max",
            r_min => "r_min", parametrization => "parametrization",
            include_dtau_metric_terms => "include_dtau_metric_terms", samples => "samples",
            direction => "direction",
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Config {
    pub a: f64,
    pub tau_range: (f64, f64),
    pub samples: usize,
    pub simultaneity_tau: f64,
    pub signal_tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfallConfig {
    pub variant: Variant,
    pub radius0: f64,
    pub k: f64,
    /// The evaporation time as given, when k was calibrated from it.
    pub tau_evap: Option<f64>,
    pub r0: f64,
    pub ur0: f64,
    pub samples: usize,
    pub integrator: IntegratorConfig,
    /// Whether h_max was given explicitly (otherwise sized from the run span).
    pub h_max_given: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformConfig {
    pub a: f64,
    pub direction: TransformDirection,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Fig1(Fig1Config),
    Infall(InfallConfig),
    Transform(TransformConfig),
}

/// Validated configuration with all defaults filled, in geometric units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub units: UnitSystem,
}

impl ScenarioConfig {
    pub fn mode(&self) -> Mode {
        match self.scenario {
            Scenario::Fig1(_) => Mode::Fig1,
            Scenario::Infall(_) => Mode::Infall,
            Scenario::Transform(_) => Mode::Transform,
        }
    }
}

const FIG1_FIELDS: &[&str] = &[
    "a",
    "tau_range",
    "simultaneity_tau",
    "signal_tau",
    "samples",
];
const TRANSFORM_FIELDS: &[&str] = &["a", "direction"];
const INFALL_FIELDS: &[&str] = &[
    "variant",
    "R0",
    "k",
    "tau_evap",
    "r0",
    "ur0",
    "rel_tol",
    "abs_tol",
    "h_init",
    "h_min",
    "h_max",
    "max_steps",
    "epsilon_horizon",
    "event_tol",
    "lambda_max",
    "tau_max",
    "r_min",
    "parametrization",
    "include_dtau_metric_terms",
    "samples",
];

fn positive(field: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::new(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

fn finite(field: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::new(
            field,
            format!("must be finite, got {value}"),
        ))
    }
}

fn core_to_config(e: CoreError) -> ConfigError {
    match e {
        CoreError::InvalidParameter { name, .. } => ConfigError::new(name, e.to_string()),
        CoreError::CoordinateSingularity { .. } => ConfigError::new("r0", e.to_string()),
        other => ConfigError::new("config", other.to_string()),
    }
}

/// Validates `settings` for `mode`, fills defaults and converts to geometric units.
pub fn load_scenario(mode: Mode, settings: &Settings) -> Result<ScenarioConfig, ConfigError> {
    if let Some(m) = settings.mode {
        if m != mode {
            return Err(ConfigError::new(
                "mode",
                format!(
                    "config is for `{}` but the command is `{}`",
                    m.name(),
                    mode.name()
                ),
            ));
        }
    }
    let allowed = match mode {
        Mode::Fig1 => FIG1_FIELDS,
        Mode::Infall => INFALL_FIELDS,
        Mode::Transform => TRANSFORM_FIELDS,
    };
    if let Some(field) = settings
        .present()
        .into_iter()
        .find(|f| !allowed.contains(f))
    {
        return Err(ConfigError::new(
            field,
            format!("not used by the `{}` command", mode.name()),
        ));
    }
    let units = settings.units.unwrap_or_default();
    let scenario = match mode {
        Mode::Fig1 => Scenario::Fig1(fig1(settings, units)?),
        Mode::Infall => Scenario::Infall(infall(settings, units)?),
        Mode::Transform => Scenario::Transform(TransformConfig {
            a: acceleration(settings, units)?,
            direction: settings.direction.unwrap_or_default(),
        }),
    };
    Ok(ScenarioConfig {
        scenario,
        format: settings.format.unwrap_or_default(),
        out: settings.out.clone(),
        units,
    })
}

fn acceleration(s: &Settings, units: UnitSystem) -> Result<f64, ConfigError> {
    let a = positive("a", s.a.unwrap_or(1.0))?;
    positive("a", units.to_geometric(a, Dimension::Acceleration))
}

fn fig1(s: &Settings, units: UnitSystem) -> Result<Fig1Config, ConfigError> {
    let time =
        |field: &str, v: f64| finite(field, v).map(|v| units.to_geometric(v, Dimension::Time));
    let (lo, hi) = match s.tau_range.as_deref() {
        None => (-3.0, 3.0),
        Some([lo, hi]) => (*lo, *hi),
        Some(_) => {
            return Err(ConfigError::new(
                "tau_range",
                "expected two numbers [min, max]",
            ))
        }
    };
    let (lo, hi) = (time("tau_range", lo)?, time("tau_range", hi)?);
    if !(lo < hi) {
        return Err(ConfigError::new("tau_range", "min must be below max"));
    }
    let samples = s.samples.unwrap_or(601);
    if samples < 2 {
        return Err(ConfigError::new("samples", "need at least 2 samples"));
    }
    Ok(Fig1Config {
        a: acceleration(s, units)?,
        tau_range: (lo, hi),
        samples,
        simultaneity_tau: time("simultaneity_tau", s.simultaneity_tau.unwrap_or(1.0))?,
        signal_tau: time("signal_tau", s.signal_tau.unwrap_or(1.0))?,
    })
}

fn infall(s: &Settings, units: UnitSystem) -> Result<InfallConfig, ConfigError> {
    let length = |v: f64| units.to_geometric(v, Dimension::Length);
    let time = |v: f64| units.to_geometric(v, Dimension::Time);

    let radius0 = length(positive("R0", s.radius0.unwrap_or(1.0))?);
    let (k, tau_evap) = match (s.k, s.tau_evap) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new(
                "k",
                "k and tau_evap are mutually exclusive",
            ))
        }
        (Some(k), None) => {
            if !(k.is_finite() && k >= 0.0) {
                return Err(ConfigError::new(
                    "k",
                    format!("must be non-negative, got {k}"),
                ));
            }
            // k carries length³/time
            (k / time(1.0), None)
        }
        (None, Some(t)) => {
            let t = time(positive("tau_evap", t)?);
            (calibrate_k(radius0, t).map_err(core_to_config)?, Some(t))
        }
        (None, None) => (0.0, None),
    };
    let variant = match (s.variant, k > 0.0) {
        (Some(Variant::Evaporating), false) => {
            return Err(ConfigError::new(
                "k",
                "evaporating variant requires k > 0 or tau_evap > 0",
            ))
        }
        (Some(Variant::Eternal), true) => {
            return Err(ConfigError::new(
                "variant",
                "eternal variant requires k = 0",
            ))
        }
        (Some(v), _) => v,
        (None, true) => Variant::Evaporating,
        (None, false) => Variant::Eternal,
    };
    let r0 = match s.r0 {
        Some(r0) => length(finite("r0", r0)?),
        None => 2.0 * radius0,
    };
    if !(r0 > radius0) {
        return Err(ConfigError::new(
            "r0",
            format!("must lie outside R0 = {radius0}"),
        ));
    }
    let ur0 = finite("ur0", s.ur0.unwrap_or(0.0))? / units.c();
    let samples = s.samples.unwrap_or(1001);
    if samples < 2 {
        return Err(ConfigError::new("samples", "need at least 2 samples"));
    }

    let d = IntegratorConfig::default();
    let integrator = IntegratorConfig {
        rel_tol: s.rel_tol.unwrap_or(d.rel_tol),
        abs_tol: s.abs_tol.unwrap_or(d.abs_tol),
        h_init: s.h_init.map(time).unwrap_or(d.h_init),
        h_min: s.h_min.map(time).unwrap_or(d.h_min),
        h_max: s.h_max.map(time).unwrap_or(d.h_max),
        max_steps: s.max_steps.unwrap_or(d.max_steps),
        epsilon_horizon: s.epsilon_horizon.unwrap_or(d.epsilon_horizon),
        event_tol: s.event_tol.unwrap_or(d.event_tol),
        lambda_max: s.lambda_max.map(time).unwrap_or(d.lambda_max),
        tau_max: s.tau_max.map(time).unwrap_or(d.tau_max),
        r_min: s.r_min.map(length),
        output_step: None,
        parametrization: s.parametrization.unwrap_or_default().into(),
        include_dtau_metric_terms: s.include_dtau_metric_terms.unwrap_or(false),
    };
    integrator.validate().map_err(core_to_config)?;
    Ok(InfallConfig {
        variant,
        radius0,
        k,
        tau_evap,
        r0,
        ur0,
        samples,
        integrator,
        h_max_given: s.h_max.is_some(),
    })
}
