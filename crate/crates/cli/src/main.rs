//! `entrack`: run entanglement-trajectory scenarios and random-matrix
//! experiments, writing CSV/JSON data plus a run manifest.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "entrack", version, about = "Entanglement trajectories of quantum algorithms")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Also write a JSON mirror of the CSV output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state trajectory of the Exact Cover adiabatic Hamiltonian.
    Adiabatic(AdiabaticArgs),
    /// Grover search with an Exact Cover or table oracle.
    Grover(GroverArgs),
    /// Semiclassical Shor order finding.
    Shor(ShorArgs),
    /// Prime-counting states P_k and U_k.
    Primes(PrimesArgs),
    /// Random-matrix experiments.
    #[command(subcommand)]
    Rmt(RmtCommand),
    /// Sample one analytic boundary curve.
    Boundary(BoundaryArgs),
    /// Generate a random Exact Cover instance with a unique solution.
    GenInstance(GenInstanceArgs),
    /// Re-check tight containment for every row of a trajectory CSV.
    #[command(hide = true)]
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct AdiabaticArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub partitions: usize,
    #[arg(long, default_value_t = 0.1)]
    pub s_step: f64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    /// Exact Cover instance file.
    #[arg(long, conflicts_with_all = ["n", "marked"])]
    pub instance: Option<PathBuf>,
    /// Search qubits for a table oracle.
    #[arg(long, requires = "marked")]
    pub n: Option<usize>,
    /// Comma-separated marked states for a table oracle.
    #[arg(long, value_delimiter = ',', requires = "n")]
    pub marked: Option<Vec<usize>>,
    /// Override the floor-formula iteration count.
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ShorArgs {
    #[arg(long = "N")]
    pub modulus: u64,
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PrimesArgs {
    #[arg(long)]
    pub n: usize,
    /// Follow each state with its full-register QFT image.
    #[arg(long)]
    pub qft: bool,
}

#[derive(Debug, Subcommand)]
pub enum RmtCommand {
    /// Pooled spectral histogram of X X†/β against the MPD density.
    Mpd(MpdArgs),
    /// Mean dominant eigenvalue of decentralized Wishart matrices.
    Dominant(DominantArgs),
    /// Monte Carlo entanglement entropy of random states.
    Page(PageArgs),
    /// Random-ρ statistics binned by λ0 with the flexible curves.
    Conditional(ConditionalArgs),
}

#[derive(Debug, Args)]
pub struct MpdArgs {
    #[arg(long)]
    pub alpha: usize,
    /// λ = α/β, in (0, 1].
    #[arg(long)]
    pub ratio: f64,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DominantArgs {
    #[arg(long)]
    pub alpha: usize,
    #[arg(long)]
    pub beta: usize,
    #[arg(long, default_value_t = 2.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub gamma_step: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PageArgs {
    #[arg(long)]
    pub alpha: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub betas: Vec<usize>,
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ConditionalArgs {
    #[arg(long)]
    pub alpha: usize,
    #[arg(long)]
    pub beta: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Curve name, e.g. f1, exact_upper, flexible_E, f_shor, renyi_d2.
    #[arg(long)]
    pub curve: String,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Defaults to α.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// MPD ratio; defaults to α/β.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenInstanceArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub clauses: usize,
    #[arg(long)]
    pub seed: u64,
    /// Instance file to write (stdout when absent).
    #[arg(long = "file")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<entrack_core::Error>() {
            Some(entrack_core::Error::Config(msg)) => Failure::Usage(msg.clone()),
            _ => Failure::Runtime(e),
        }
    }
}

impl From<entrack_core::Error> for Failure {
    fn from(e: entrack_core::Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(k) = cli.common.threads {
        if k == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
