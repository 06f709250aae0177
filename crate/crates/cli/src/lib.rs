//! `horizonlab` command line: the Minkowski diagram of a Rindler observer
//! (`fig1`), radial infall toward an eternal or evaporating black hole
//! (`infall`) and batch coordinate conversion (`transform`).
//!
//! Exit codes: 0 success, 1 usage, configuration/validation or I/O error,
//! 2 numerical failure of the integrator.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod scenario;
pub mod table;
pub mod transform;

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufWriter, ErrorKind, Write};
use std::path::PathBuf;

use clap::Parser;
use horizonlab_core::Error as CoreError;

use config::{load_scenario, ConfigError, Mode, Scenario, ScenarioConfig, Settings};
use table::{Format, OutputTable};

#[derive(Debug, Parser)]
#[command(name = "horizonlab", version, about)]
pub struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    pub mode: Mode,
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Input { line: usize, message: String },
    Model(CoreError),
    Numerical(CoreError),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Input { line, message } => write!(f, "input line {line}: {message}"),
            CliError::Model(e) => write!(f, "invalid scenario: {e}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Model(e)
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// Merges the config file (if any) with the flags and validates the result.
pub fn resolve(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let file = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    Ok(load_scenario(
        cli.mode,
        &file.overlaid(cli.settings.clone()),
    )?)
}

/// Runs a validated scenario; `input` feeds the transform command.
pub fn execute(cfg: &ScenarioConfig, input: impl BufRead) -> Result<OutputTable, CliError> {
    Ok(match &cfg.scenario {
        Scenario::Fig1(c) => scenario::run_fig1(c, cfg.units)?,
        Scenario::Infall(c) => scenario::run_infall(c, cfg.units)?,
        Scenario::Transform(c) => transform::run_transform(c, cfg.units, input)?,
    })
}

fn write_output(
    table: &OutputTable,
    cfg: &ScenarioConfig,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    // A closed downstream pipe (e.g. `| head`) is not an error.
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let quiet = |r: std::io::Result<()>| match r {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        other => other,
    };
    match &cfg.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.emit(cfg.format, &mut w).map_err(io)
        }
        None => {
            quiet(stdout.write_all(table.render(cfg.format).as_bytes())).map_err(io)?;
            quiet(stdout.flush()).map_err(io)
        }
    }
}

fn termination_note(table: &OutputTable) -> Option<String> {
    let kind = table.meta.get("termination")?.as_str()?;
    let num = |k: &str| {
        table
            .meta
            .get(k)
            .and_then(|v| v.as_f64())
            .unwrap_or(f64::NAN)
    };
    Some(format!(
        "termination: {kind} at lambda={} tau={} r={}",
        table::format_g17(num("event_lambda")),
        table::format_g17(num("event_tau")),
        table::format_g17(num("event_r")),
    ))
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: impl BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{e}");
            return 1;
        }
        Err(e) => {
            // --help and --version
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let outcome = resolve(&cli).and_then(|cfg| {
        let table = execute(&cfg, stdin)?;
        write_output(&table, &cfg, stdout)?;
        // CSV has no room for metadata; report how the run ended on stderr.
        if cfg.format == Format::Csv {
            if let Some(note) = termination_note(&table) {
                let _ = writeln!(stderr, "{note}");
            }
        }
        Ok(())
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "horizonlab: {e}");
            e.exit_code()
        }
    }
}
