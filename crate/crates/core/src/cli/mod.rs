//! Batch front-end: TOML run configurations in, CSV curves and a JSON manifest out.
//!
//! Verbs, as exposed by the `risthz` binary:
//!
//! - `run <config>` computes every requested metric and method over the sweep.
//! - `validate <config>` reports every problem found without computing curves.
//! - `presets` lists the bundled scenarios; their names are accepted wherever a
//!   config path is.

mod config;
mod presets;
mod run;
mod validate;

pub use config::{
    db_to_linear, dbm_to_watts, linear_to_db, Axis, BudgetConfig, ElementsConfig, HopConfig, McConfig, Method,
    MetricKind, ModulationConfig, RunConfig, SweepConfig, TpeConfig, MAX_SWEEP_POINTS,
};
pub use presets::{preset, Preset, PRESETS};
pub use run::{run, run_config, CurvePoint, PerfCurve, RunSummary, CSV_HEADER, MANIFEST_SCHEMA_VERSION};
pub use validate::{validate, validate_config, Issue, Severity};

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("compute error for {metric} at {axis} = {value}: {message}")]
    Compute {
        metric: String,
        axis: String,
        value: f64,
        message: String,
    },
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Io { .. } => EXIT_CONFIG,
            Self::Compute { .. } | Self::Output(_) => EXIT_COMPUTE,
        }
    }
}

/// Loads `source` as a file path, or as a bundled preset name when no such file exists.
pub fn load(source: &str) -> Result<RunConfig, CliError> {
    let path = Path::new(source);
    if !path.exists() {
        if let Some(p) = preset(source) {
            return RunConfig::from_toml(p.toml);
        }
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    RunConfig::from_toml(&text)
}

#[derive(Debug, Parser)]
#[command(name = "risthz", version, about = "Outage and BER curves for RIS-assisted THz links")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the curves of a config file or preset.
    Run { config: String },
    /// Check a config file or preset without computing curves.
    Validate { config: String },
    /// List the bundled presets.
    Presets,
}

/// Parses `args` (including the program name) and runs the verb; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match args.command {
        Command::Presets => {
            for p in PRESETS {
                println!("{:<24} {}", p.name, p.description);
            }
            EXIT_OK
        }
        Command::Validate { config } => match validate(&config) {
            Ok(issues) if issues.is_empty() => {
                println!("{config}: ok");
                EXIT_OK
            }
            Ok(issues) => {
                for i in &issues {
                    println!("{i}");
                }
                if issues.iter().any(|i| i.severity == Severity::Error) {
                    EXIT_CONFIG
                } else {
                    EXIT_OK
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Run { config } => match run(&config) {
            Ok(summary) => {
                for f in &summary.files {
                    println!("wrote {}", f.display());
                }
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    }
}
