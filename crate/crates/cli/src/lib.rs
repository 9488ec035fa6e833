//! Command-line front end for building diverse high-quality TTP solution sets.

pub mod artifacts;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ttp_edo::{EdgeDenominator, FitnessMode, KpOperator};

#[derive(Debug, Parser)]
#[command(
    name = "ttp-edo",
    version,
    about = "Evolutionary diversity optimisation for the Traveling Thief Problem"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a diverse population from one compliant seed solution.
    Run(RunArgs),
    /// Re-run the configuration stored in a run manifest.
    Replay(ReplayArgs),
    /// Report edge and item robustness of a population file.
    Robustness(RobustnessArgs),
    /// Pack a fixed tour with the DP or the (1+1)EA.
    Pack(PackArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TTP benchmark file.
    #[arg(long)]
    pub instance: PathBuf,
    /// Best known objective value.
    #[arg(long, allow_hyphen_values = true)]
    pub z_star: f64,
    /// Solution snapshot JSON meeting the quality threshold.
    #[arg(long)]
    pub seed_solution: PathBuf,
    #[arg(long, default_value_t = 0.1, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 50, value_parser = parse_positive)]
    pub mu: usize,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = FitnessMode::H)]
    pub fitness: FitnessMode,
    #[arg(long, default_value_t = KpOperator::Dp)]
    pub kp: KpOperator,
    /// (1+1)EA evaluations per offspring [default: 2m].
    #[arg(long)]
    pub ea_budget: Option<usize>,
    #[arg(long, default_value_t = EdgeDenominator::TwoNMu)]
    pub edge_denominator: EdgeDenominator,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory for the reproduced artifacts.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RobustnessArgs {
    /// Population JSONL, one solution snapshot per line.
    #[arg(long)]
    pub population: PathBuf,
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct PackArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// 1-based tour starting at city 1, as a JSON array or whitespace
    /// separated integers.
    #[arg(long)]
    pub tour: PathBuf,
    #[arg(long, default_value_t = KpOperator::Dp)]
    pub method: KpOperator,
    /// (1+1)EA evaluations [default: 2m].
    #[arg(long)]
    pub ea_budget: Option<usize>,
    /// RNG seed for the (1+1)EA.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1.0).contains(&a) {
        Ok(a)
    } else {
        Err(format!("{a} is not in [0, 1)"))
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `args` (program name first) and runs the chosen command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code:
/// 0 on success, 1 for a usage error, 2 when the command fails.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => commands::run(args, out),
        Command::Replay(args) => commands::replay(args, out),
        Command::Robustness(args) => commands::robustness(args, out),
        Command::Pack(args) => commands::pack(args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
