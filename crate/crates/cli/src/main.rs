use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod cluster;
mod error;
mod eval;
mod generate;
mod io;
mod manifest;
mod plot;

use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "hkc", version, about = "Hierarchical clustering with the Isolation Distributional Kernel")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic labeled dataset as CSV.
    Generate(generate::GenerateArgs),
    /// Build a dendrogram and flat assignment for a dataset.
    Cluster(cluster::ClusterArgs),
    /// Score a saved dendrogram against ground-truth labels.
    Eval(eval::EvalArgs),
    /// Time H-KC and bisecting k-means on growing copies of a mixture.
    Bench(bench::BenchArgs),
    /// Render a 2-D dataset colored by cluster as SVG.
    Plot(plot::PlotArgs),
}

/// Output directory shared by commands that write several files.
#[derive(Debug, Clone, Args)]
pub struct OutDir {
    #[arg(long, env = "HKC_OUT_DIR", default_value = "hkc-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Hkc,
    BisectKmeans,
    Ahc,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return error::usage("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Cluster(a) => cluster::run(a),
        Command::Eval(a) => eval::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Plot(a) => plot::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
