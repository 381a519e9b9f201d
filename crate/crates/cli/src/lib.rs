//! Command-line front end of `cutwave`: configuration files, study drivers
//! and CSV/VTK output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cutwave::analysis::Scenario;

use crate::commands::Executor;
use crate::config::{parse_config, parse_order, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "cutwave", version, about = "Cut finite element elastic wave experiments")]
pub struct Cli {
    /// `key = value` configuration file; missing keys take the paper defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated element orders (overrides `orders`).
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_order, value_name = "LIST")]
    pub orders: Option<Vec<usize>>,
    /// Number of mesh levels per order (overrides `refinements`).
    #[arg(long, global = true, value_name = "N")]
    pub refinements: Option<usize>,
    /// Worker threads for independent configurations; defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Write rows in canonical configuration order instead of completion order.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioChoice {
    Single,
    Interface,
    Both,
}

impl ScenarioChoice {
    fn scenarios(self) -> Vec<Scenario> {
        match self {
            ScenarioChoice::Single => vec![Scenario::PlaneWaveCavity],
            ScenarioChoice::Interface => vec![Scenario::Transmission],
            ScenarioChoice::Both => vec![Scenario::PlaneWaveCavity, Scenario::Transmission],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error at the end time for a sequence of meshes; writes convergence.csv.
    Converge {
        #[arg(long, value_enum, default_value = "both")]
        scenario: ScenarioChoice,
    },
    /// Condition numbers and CFL number against the cut size; writes cutsweep.csv.
    Cutsweep {
        /// Also sweep with both ghost penalties switched off
        /// (cutsweep_unstabilized.csv).
        #[arg(long)]
        unstabilized: bool,
    },
    /// Time-dependent run of the configured problem with VTK snapshots.
    Run {
        /// Also write the mass and stiffness matrices as triplets.
        #[arg(long)]
        export_matrices: bool,
    },
    /// Dumps the volume and surface quadrature rules of the configured problem.
    Quadtest,
}

/// Configuration file merged with command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
            parse_config(&text, &path.display().to_string())?
        }
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.orders {
        cfg.orders = o.clone();
    }
    if let Some(r) = cli.refinements {
        if r == 0 {
            return Err(CliError::Usage("--refinements must be at least 1".into()));
        }
        cfg.refinements = r;
    }
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

/// Runs the selected command and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let cfg = load_config(cli)?;
    let exec = Executor::new(cli.threads, cli.deterministic)?;
    let out = cfg.output.clone();
    match cli.command {
        Command::Converge { scenario } => Ok(vec![commands::converge(&cfg, &exec, &out, &scenario.scenarios())?]),
        Command::Cutsweep { unstabilized } => {
            let mut files = vec![commands::cutsweep(&cfg, &exec, &out, true)?];
            if unstabilized {
                files.push(commands::cutsweep(&cfg, &exec, &out, false)?);
            }
            Ok(files)
        }
        Command::Run { export_matrices } => commands::run(&cfg, &out, export_matrices),
        Command::Quadtest => {
            let (files, s) = commands::quadtest(&cfg, &out)?;
            println!(
                "area {:.15e} dirichlet {:.15e} neumann {:.15e} interface {:.15e}",
                s.area, s.dirichlet_length, s.neumann_length, s.interface_length
            );
            Ok(files)
        }
    }
}
