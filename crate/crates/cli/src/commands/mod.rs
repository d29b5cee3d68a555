// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::Value;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Envelope, Sink, Table, Timing, Warning, SCHEMA_VERSION};

mod boundaries;
mod corners;
mod mcd;
mod phase_diagram;
mod spectrum;
mod validate;

/// What a command hands back for serialization.
pub struct Report {
    pub payload: Value,
    pub warnings: Vec<Warning>,
    /// CSV files by name.
    pub tables: Vec<(&'static str, Table)>,
    /// Failed self-checks; nonzero turns the run into an error after writing.
    pub failed_checks: usize,
}

impl Report {
    pub fn new(payload: Value) -> Self {
        Self { payload, warnings: Vec::new(), tables: Vec::new(), failed_checks: 0 }
    }
}

/// Radians to units of π.
pub(crate) fn in_pi(x: f64) -> f64 {
    x / PI
}

/// Run the configured command and write its files.
pub fn run(config: &RunConfig, timing: bool) -> CliResult<Vec<PathBuf>> {
    let start = Instant::now();
    let command = config.command.ok_or_else(|| CliError::Config("no command given".into()))?;
    config.validate()?;
    let report = match command {
        Command::PhaseDiagram => phase_diagram::run(config)?,
        Command::Spectrum => spectrum::run(config)?,
        Command::Corners => corners::run(config)?,
        Command::Mcd => mcd::run(config)?,
        Command::Boundaries => boundaries::run(config)?,
        Command::Validate => validate::run(config)?,
    };
    let mut sink = Sink::new(&config.output.dir, &config.output.formats)?;
    for (name, table) in &report.tables {
        sink.csv(name, table)?;
    }
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command: command.name(),
        config,
        payload: report.payload,
        warnings: report.warnings,
        timing: timing.then(|| Timing { wall_seconds: start.elapsed().as_secs_f64() }),
    };
    sink.json(&format!("{}.json", command.name()), &envelope)?;
    if report.failed_checks > 0 {
        return Err(CliError::ValidationFailed(report.failed_checks));
    }
    Ok(sink.written)
}
