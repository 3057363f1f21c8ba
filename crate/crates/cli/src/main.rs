//! Command-line front end for the two-qubit common-bath toolkit.
//!
//! Four subcommands: `spectrum` writes the full eigendecomposition,
//! `evolve` integrates an initial state with a built-in cross-check,
//! `figure` regenerates the bundled datasets, and `sweep` tabulates scalar
//! diagnostics over a parameter grid. Exit codes: 0 success, 1 invalid
//! input, 2 degenerate spectrum, 3 oracle disagreement.

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{cmd_evolve, cmd_figure, cmd_spectrum, cmd_sweep, FigureId, OutputSpec};
use config::RunConfig;
use error::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "subrad-sync",
    version,
    about = "Spectral decomposition, modal time evolution and synchronization \
             diagnostics for two detuned qubits decaying into a common bath"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the eigendecomposition as spectrum.json and spectrum.csv
    Spectrum(CommonArgs),
    /// Evolve the configured initial state and cross-check the modal route
    /// against a fixed-step integrator
    Evolve(CommonArgs),
    /// Regenerate a bundled dataset from its baked-in parameters
    Figure {
        /// Dataset id
        #[arg(long, value_enum)]
        id: FigureId,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate scalar diagnostics over a one- or two-axis parameter grid
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configured one; default ".")
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render SVG plots
    #[arg(long)]
    svg: bool,
}

impl CommonArgs {
    fn load_config(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::input("missing --config <path>".to_string()))?;
        RunConfig::load(path)
    }

    fn output_spec(&self, cfg: Option<&RunConfig>) -> Result<OutputSpec> {
        let dir = self
            .out
            .clone()
            .or_else(|| cfg.and_then(|c| c.out_dir.as_ref().map(PathBuf::from)))
            .unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)?;
        let svg = self.svg || cfg.map(|c| c.emit_svg).unwrap_or(false);
        Ok(OutputSpec { dir, svg })
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Spectrum(common) => {
            let cfg = common.load_config()?;
            let out = common.output_spec(Some(&cfg))?;
            cmd_spectrum(&cfg, &out)
        }
        Cmd::Evolve(common) => {
            let cfg = common.load_config()?;
            let out = common.output_spec(Some(&cfg))?;
            cmd_evolve(&cfg, &out)
        }
        Cmd::Figure { id, common } => {
            // Figures carry their own parameters; a config, if given, only
            // contributes the output options.
            let cfg = match &common.config {
                Some(path) => Some(RunConfig::load(path)?),
                None => None,
            };
            let out = common.output_spec(cfg.as_ref())?;
            cmd_figure(id, &out)
        }
        Cmd::Sweep(common) => {
            let cfg = common.load_config()?;
            let out = common.output_spec(Some(&cfg))?;
            cmd_sweep(&cfg, &out)
        }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
