//! Command-line front end: `simulate`, `table2` and `sweep` writing CSV files.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

pub mod config;
pub mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{load_config, parse_config, GridSpec, Mode, ScenarioConfig, SweepAxis, SweepSpec};
pub use run::{run, sweep, table2, Output};

use crate::physics::{default_params, FieldConfig};

#[derive(Parser, Debug)]
#[command(
    name = "st0sim",
    version,
    about = "Singlet-triplet qubit leakage simulator"
)]
struct Cli {
    /// Omit `#` header and comment lines from the CSV.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the scenario described by a JSON config.
    Simulate {
        /// Path to the JSON config.
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write second-order and exact energies at 0, 0.1 and 0.5 mT transverse fields.
    Table2 {
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep one field axis and write energies and rotation-speed metrics.
    Sweep {
        /// Path to the JSON config supplying the base scenario.
        config: PathBuf,
        /// Field axis name, e.g. dB_x_T or B_perp_T.
        #[arg(long)]
        axis: String,
        /// Comma-separated values in tesla.
        #[arg(long)]
        values: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 1).
    Config(String),
    /// Unreadable input or unwritable output (exit 1).
    Io(String),
    /// Numerical failure (exit 2).
    Numerical(crate::Error),
}

impl CliError {
    /// Process exit code.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical error: {e}"),
        }
    }
}

fn numerical(e: crate::Error) -> CliError {
    match e {
        crate::Error::InvalidState(_) => CliError::Config(e.to_string()),
        other => CliError::Numerical(other),
    }
}

fn write_output(out: &Output, path: &Path, quiet: bool) -> Result<(), CliError> {
    std::fs::write(path, out.render(quiet))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let cfg = load_config(path).map_err(CliError::Config)?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

/// Parses comma-separated values.
pub fn parse_values(list: &str) -> Result<Vec<f64>, String> {
    let values = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| format!("bad value `{s}`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    config::check_values(values)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = load(&config)?;
            let o = run(&cfg).map_err(numerical)?;
            write_output(&o, &out, cli.quiet)
        }
        Command::Table2 { out } => {
            let o = table2(&default_params(), FieldConfig::table1().b_z).map_err(numerical)?;
            write_output(&o, &out, cli.quiet)
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
        } => {
            let cfg = load(&config)?;
            let spec = SweepSpec {
                axis: SweepAxis::parse(&axis).map_err(CliError::Config)?,
                values: parse_values(&values)
                    .map_err(|e| CliError::Config(format!("--values: {e}")))?,
            };
            let mut o = sweep(&cfg, &spec).map_err(numerical)?;
            o.comments
                .insert(0, format!("st0sim sweep base_mode={}", cfg.mode.name()));
            o.comments
                .extend(cfg.warnings.iter().map(|w| format!("warning: {w}")));
            write_output(&o, &out, cli.quiet)
        }
    }
}

/// Binary entry point.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("st0sim: {e}");
            ExitCode::from(e.code())
        }
    }
}
