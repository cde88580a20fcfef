//! `topoclass`: generate lattice neighborhoods, compute their persistence
//! diagrams, and classify them as BCC or FCC.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error,
//! 4 numerical failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{bench, bound, cv, dist, features, fit, generate, pd};
use config::{layer, resolve_seed, ConfigFile, Globals, UsageError};
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "topoclass", version, about = "Crystal-structure classification from persistence diagrams")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for stochastic subcommands; falls back to the config file, then
    /// TOPOCLASS_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for corpus-level work (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a lattice sample or a labeled neighborhood corpus.
    Generate(generate::GenerateArgs),
    /// Compute persistence diagrams and cardinality records.
    Pd(pd::PdArgs),
    /// Diagram distances, for a pair of files or a whole corpus.
    Dist(dist::DistArgs),
    /// Per-class distance statistics for every diagram.
    Features(features::FeaturesArgs),
    /// Cross-validated accuracy per corpus.
    Cv(cv::CvArgs),
    /// Cross-validated accuracy over a grid of c values.
    Grid(cv::GridArgs),
    /// Weighted least-squares fit of hole count against point count.
    Fit(fit::FitArgs),
    /// Probabilistic upper bounds on same-class dimension-1 distances.
    Bound(bound::BoundArgs),
    /// Time the pipeline stages.
    Bench(bench::BenchArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let globals = Globals {
        seed: resolve_seed(cli.seed, file.seed)?,
        format: cli.format.or(file.format).unwrap_or_default(),
    };
    if let Some(jobs) = cli.jobs.or(file.jobs) {
        if jobs == 0 {
            return Err(config::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let g = &globals;
    match &cli.command {
        Command::Generate(a) => generate::run(&layer(a, file.generate.as_ref())?, g),
        Command::Pd(a) => pd::run(&layer(a, file.pd.as_ref())?, g),
        Command::Dist(a) => dist::run(&layer(a, file.dist.as_ref())?, g),
        Command::Features(a) => features::run(&layer(a, file.features.as_ref())?, g),
        Command::Cv(a) => cv::run_cv(&layer(a, file.cv.as_ref())?, g),
        Command::Grid(a) => cv::run_grid(&layer(a, file.grid.as_ref())?, g),
        Command::Fit(a) => fit::run(&layer(a, file.fit.as_ref())?, g),
        Command::Bound(a) => bound::run(&layer(a, file.bound.as_ref())?, g),
        Command::Bench(a) => bench::run(&layer(a, file.bench.as_ref())?, g),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use topoclass::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::InvalidParameter(_) | E::InsufficientData(_) => 2,
                E::Numerical(_) => 4,
                E::InvalidInput(_) | E::Parse { .. } | E::Io(_) | E::Json(_) | E::Csv(_) => 3,
            };
        }
    }
    3
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|c| {
        let io = c
            .downcast_ref::<std::io::Error>()
            .or_else(|| match c.downcast_ref::<topoclass::Error>() {
                Some(topoclass::Error::Io(e)) => Some(e),
                _ => None,
            });
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed downstream pipe (`| head`) is not a failure
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
