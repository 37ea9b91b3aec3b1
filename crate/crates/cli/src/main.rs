//! Command-line driver.
//!
//! ```text
//! vlasov run <config>             simulate, write amplitude.csv and snapshots
//! vlasov converge <config>        convergence study, write convergence.csv
//! vlasov print-defaults <case>    print a complete config for a benchmark
//! ```
//!
//! Exit status is 1 for configuration or I/O errors and 2 for numerical
//! failures, which name the pipeline phase that failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vlasov_core::analysis::{convergence_study, ConvergenceError};
use vlasov_core::output::{write_convergence_file, write_run};
use vlasov_core::{CaseKind, ConfigError, Method, Preset, RunConfig, RunOptions, SimulationError};

/// Environment variable naming the output directory when neither the
/// command line nor the config sets one.
const OUTPUT_DIR_ENV: &str = "VLASOV_OUTPUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "output";

#[derive(Debug, Parser)]
#[command(
    name = "vlasov",
    version,
    about = "Interpolating particle solver for 1D-1V Vlasov-Poisson"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a benchmark and write amplitude.csv plus the requested snapshots
    Run {
        config: PathBuf,
        /// Overrides output_dir from the config and $VLASOV_OUTPUT_DIR
        #[arg(short, long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare the study resolutions against the reference resolution
    Converge {
        config: PathBuf,
        #[arg(short, long)]
        output_dir: Option<PathBuf>,
    },
    /// Print the full default configuration of a benchmark
    PrintDefaults {
        /// weak_landau, two_stream, bump_on_tail or free_streaming
        case: CaseKind,
        /// direct or pw
        #[arg(long, default_value = "pw")]
        method: Method,
        /// paper, ci or long
        #[arg(long, default_value = "paper")]
        preset: Preset,
    },
}

#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Io(PathBuf, std::io::Error),
    Numerical(SimulationError),
    Study(ConvergenceError),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(..) => 1,
            Failure::Numerical(_) => 2,
            Failure::Study(e) if e.simulation().is_some() => 2,
            Failure::Study(_) => 1,
        }
    }

    fn report(&self) -> String {
        match self {
            Failure::Config(e) => format!("config error: {e}"),
            Failure::Io(path, e) => format!("cannot write {}: {e}", path.display()),
            Failure::Numerical(e) => numerical(e),
            Failure::Study(ConvergenceError::Run { resolution, source }) => {
                format!("{} (resolution {resolution})", numerical(source))
            }
            Failure::Study(e) => format!("config error: {e}"),
        }
    }
}

fn numerical(e: &SimulationError) -> String {
    match e.phase() {
        Some(phase) => format!("numerical failure in phase {phase}: {e}"),
        None => format!("setup failure: {e}"),
    }
}

fn load(path: &Path) -> Result<RunConfig, Failure> {
    let config = RunConfig::from_file(path).map_err(Failure::Config)?;
    if config.threads > 0 {
        // the pool can only be installed once per process; a second call is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global();
    }
    Ok(config)
}

fn output_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

fn run(path: &Path, flag: Option<PathBuf>) -> Result<String, Failure> {
    let config = load(path)?;
    let dir = output_dir(flag, &config);
    let out = vlasov_core::run(&config, RunOptions::default()).map_err(Failure::Numerical)?;
    let files = write_run(&dir, &out.diagnostics, &out.snapshots).map_err(|e| Failure::Io(dir.clone(), e))?;

    let first = out.diagnostics.first().expect("a run records at least t = 0");
    let last = out.diagnostics.last().expect("a run records at least t = 0");
    let drift = out
        .diagnostics
        .iter()
        .map(|d| (d.mass - first.mass).abs())
        .fold(0.0, f64::max);
    Ok(format!(
        "{} {} {}x{}: t = {} in {} steps, E_max {:.6e} -> {:.6e}, mass drift {:.2e}; wrote {} files to {}",
        config.case.kind,
        config.method,
        config.nx,
        config.nv,
        last.t,
        out.diagnostics.len() - 1,
        first.e_max,
        last.e_max,
        drift,
        files.len(),
        dir.display()
    ))
}

fn converge(path: &Path, flag: Option<PathBuf>) -> Result<String, Failure> {
    let config = load(path)?;
    let dir = output_dir(flag, &config);
    let rows = convergence_study(&config).map_err(Failure::Study)?;
    let file = write_convergence_file(&dir, &rows).map_err(|e| Failure::Io(dir.clone(), e))?;

    let mut spacings: Vec<f64> = rows.iter().map(|r| r.h).collect();
    spacings.dedup();
    let worst: Vec<String> = spacings
        .iter()
        .map(|&h| {
            let e = rows
                .iter()
                .filter(|r| r.h == h)
                .map(|r| r.err_e_inf)
                .fold(0.0, f64::max);
            format!("h = {h:.4}: {e:.3e}")
        })
        .collect();
    Ok(format!(
        "{} convergence against {}: max |E - E_ref| {}; wrote {}",
        config.case.kind,
        config.reference_resolution,
        worst.join(", "),
        file.display()
    ))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, output_dir } => run(&config, output_dir),
        Command::Converge { config, output_dir } => converge(&config, output_dir),
        Command::PrintDefaults { case, method, preset } => {
            print!("{}", RunConfig::preset(case, method, preset).to_config_string());
            return ExitCode::SUCCESS;
        }
    };
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.report());
            ExitCode::from(failure.exit_code())
        }
    }
}
