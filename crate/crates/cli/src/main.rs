// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::{parse_formats, parse_grid, Command, Format, Overrides, RunConfig};
use error::CliError;

/// Floquet higher-order topology of the 2D on-resonance double-kicked lattice.
///
/// Kick strengths and scan ranges are in units of π. Results go to the output
/// directory as CSV tables and a JSON envelope that echoes the configuration.
#[derive(Debug, Parser)]
#[command(name = "ordkl", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Scan resolution as NxM.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,

    #[arg(long, global = true)]
    k1: Option<f64>,
    #[arg(long, global = true)]
    k2: Option<f64>,
    #[arg(long, global = true)]
    k3: Option<f64>,
    #[arg(long, global = true)]
    k4: Option<f64>,

    /// Open lattice size L (sets both axes).
    #[arg(long, global = true)]
    size: Option<usize>,

    /// Number of driving periods for MCD averages.
    #[arg(long, global = true)]
    tmax: Option<usize>,

    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output formats, e.g. `csv,json`.
    #[arg(long, global = true, value_parser = parse_format_list)]
    format: Option<FormatList>,

    /// Seed for randomized self-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Record wall-clock time in the envelope (output is then not byte-stable).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone)]
struct FormatList(Vec<Format>);

fn parse_format_list(s: &str) -> Result<FormatList, String> {
    parse_formats(s).map(FormatList)
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Invariants (w0x, wπx, w0y, wπy, w0, wπ) over a two-strength scan.
    PhaseDiagram,
    /// Open-chain eigenphases, IPRs and edge-mode labels for both axes.
    Spectrum,
    /// Corner-mode census of the open square, with density maps.
    Corners,
    /// Mean chiral displacement at one point or along a sweep.
    Mcd {
        /// Sweep one kick strength as set in the `[sweep]` section.
        #[arg(long)]
        sweep: bool,
        /// Add the open-lattice corner census to every sweep sample.
        #[arg(long)]
        census: bool,
    },
    /// Analytic phase-boundary curves in the scan plane.
    Boundaries,
    /// Fast seeded self-checks.
    Validate,
}

fn build_config(cli: Cli) -> Result<(RunConfig, bool), CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let (command, sweep, census) = match cli.command {
        Sub::PhaseDiagram => (Command::PhaseDiagram, false, false),
        Sub::Spectrum => (Command::Spectrum, false, false),
        Sub::Corners => (Command::Corners, false, false),
        Sub::Mcd { sweep, census } => (Command::Mcd, sweep, census),
        Sub::Boundaries => (Command::Boundaries, false, false),
        Sub::Validate => (Command::Validate, false, false),
    };
    config.command = Some(command);
    config.apply(Overrides {
        k: [cli.k1, cli.k2, cli.k3, cli.k4],
        size: cli.size,
        grid: cli.grid,
        t_max: cli.tmax,
        workers: cli.workers,
        formats: cli.format.map(|f| f.0),
        out: cli.out,
        seed: cli.seed,
        sweep,
        census,
    });
    Ok((config, cli.timing))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|(config, timing)| {
        config.validate()?;
        if let Some(n) = config.workers {
            // Only fails if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        commands::run(&config, timing)
    });
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", e.record());
            eprintln!("ordkl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
