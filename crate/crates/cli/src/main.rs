use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use joints_core::Epsilon;

mod commands;
mod dump;

/// Exit codes: 0 ok, 2 usage or domain error, 3 a check failed.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 3,
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

pub type CmdResult = std::result::Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "joints", version, about = "Joints in matroids: constructions, checks and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a 3-AP-free subset of 1..=N.
    Behrend(BehrendArgs),
    /// Build the grid construction for N and write its JSON dump.
    Construct(ConstructArgs),
    /// Construction and analysis statistics for several N.
    Sweep(SweepArgs),
    /// Axis-parallel lines of the k x k x k grid and their joints.
    Grid3d(Grid3dArgs),
    /// Reload a construction dump and re-run the checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct BehrendArgs {
    /// Upper end of the range 1..=N.
    #[arg(long = "n")]
    pub n: u64,
    /// Also print the optimal set (N <= 30).
    #[arg(long)]
    pub oracle: bool,
    /// Scan the result for 3-term progressions.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// Check axioms on every subset instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Samples for sampled checks; work items for the property check.
    #[arg(long, default_value_t = 2000)]
    pub budget: u64,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Accept inconclusive (budget-limited) checks.
    #[arg(long)]
    pub allow_inconclusive: bool,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long = "n")]
    pub n: u64,
    /// Run the triangle, axiom and property checks after building.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub checks: CheckArgs,
    /// Write the dump here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated values of N.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<u64>,
    /// Exact rational, e.g. 1/2.
    #[arg(long, default_value = "1/2")]
    pub epsilon: Epsilon,
    /// CSV path; a JSON copy is written next to it. Without it CSV goes to
    /// stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail when any row failed.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct Grid3dArgs {
    /// Side length, at least 2.
    #[arg(long = "k")]
    pub k: usize,
    /// Require k^3 joints and 3k^2 lines.
    #[arg(long)]
    pub verify: bool,
    /// Include coordinates and line members.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Dump written by `construct`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub checks: CheckArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Behrend(a) => commands::behrend(&a),
        Command::Construct(a) => commands::construct(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Grid3d(a) => commands::grid3d(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(e) | Failure::Check(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
