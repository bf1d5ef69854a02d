use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rmtlab::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use rmtlab::Error;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Esd,
    Moments,
    Stieltjes,
    Walks,
    Hankel,
    Charfn,
    Energy,
    Decomposition,
}

impl From<Kind> for ExperimentKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Esd => ExperimentKind::Esd,
            Kind::Moments => ExperimentKind::Moments,
            Kind::Stieltjes => ExperimentKind::Stieltjes,
            Kind::Walks => ExperimentKind::Walks,
            Kind::Hankel => ExperimentKind::Hankel,
            Kind::Charfn => ExperimentKind::Charfn,
            Kind::Energy => ExperimentKind::Energy,
            Kind::Decomposition => ExperimentKind::Decomposition,
        }
    }
}

/// Runs a random-matrix or random-graph experiment and writes CSV/JSON results.
///
/// Set RMTLAB_THREADS to cap the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "rmtlab", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    kind: Kind,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (defaults to `out` from the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config replicate count.
    #[arg(long)]
    replicates: Option<usize>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rmtlab: {msg}");
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        EXIT_CONFIG
    } else if matches!(e, Error::Io(_) | Error::Csv(_)) {
        EXIT_IO
    } else {
        EXIT_NUMERIC
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("RMTLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| format!("RMTLAB_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(msg) = configure_threads() {
        return fail(EXIT_CONFIG, msg);
    }
    let mut config = match ExperimentConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(exit_code(&e), e),
    };
    let kind = ExperimentKind::from(args.kind);
    if let Some(k) = config.kind.filter(|&k| k != kind) {
        return fail(
            EXIT_CONFIG,
            format!("config error at `kind`: file says `{}`, command line says `{}`", k.as_str(), kind.as_str()),
        );
    }
    config.kind = Some(kind);
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(r) = args.replicates {
        config.replicates = r;
    }
    let Some(out) = args.out.clone().or_else(|| config.out.clone()) else {
        return fail(EXIT_CONFIG, "config error at `out`: no output directory given");
    };
    match run_experiment(&config, &out) {
        Ok(report) => {
            println!(
                "{} {}: {} files in {} ({:.2} s)",
                report.version,
                kind.as_str(),
                report.files.len(),
                out.display(),
                report.wall_clock_seconds
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(exit_code(&e), e),
    }
}
