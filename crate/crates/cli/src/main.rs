//! Command-line front end: parse operator files, dispatch computations,
//! and emit CSV/JSON/SVG artifacts. Exit codes: 0 success, 1 validation
//! error, 2 computation failure.

mod commands;
mod demo;
mod fmt;
mod json;
mod svg;
mod verify;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Computation(String),
}

impl From<pjacobi::Error> for CliError {
    fn from(e: pjacobi::Error) -> Self {
        match e {
            pjacobi::Error::InvalidOperator(_) | pjacobi::Error::Precondition(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pjacobi",
    about = "Spectral toolkit for N-periodic Jacobi operators with complex coefficients",
    version
)]
struct Cli {
    /// Number of worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hill discriminant of an operator (ascending coefficients).
    Discriminant {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Trace the spectrum as arcs in the complex plane (CSV, optional SVG).
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 512)]
        slices: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Periodic/antiperiodic eigenvalues, or the Floquet family at --kappa.
    Eigs {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dirichlet spectrum and the trace-identity residuals.
    Dirichlet {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify periodic/antiperiodic eigenvalues, the double-period matrix
    /// Jordan structure, and the interval-spectrum rigidity.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Find all potentials with a prescribed discriminant.
    Inverse {
        #[arg(long)]
        input: PathBuf,
        /// Newton starts (default 200 * N!).
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rebuild a potential from two consecutive Dirichlet root sets.
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integrate the isospectral flow and audit discriminant conservation.
    Toda {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the full identity suite on an operator.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Regenerate the bundled reference scenarios and assert their values.
    Demo {
        /// Scenario: example1, example2i, example2ii, example3i, example3ii,
        /// example3iii, example4, pathological, borg, or all.
        #[arg(default_value = "all")]
        name: String,
        /// Newton starts override for the inverse scenarios.
        #[arg(long)]
        starts: Option<usize>,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Discriminant { input, output } => {
            commands::discriminant(&input, output.as_deref())
        }
        Command::Spectrum {
            input,
            slices,
            output,
            svg,
        } => commands::spectrum(&input, slices, output.as_deref(), svg.as_deref()),
        Command::Eigs {
            input,
            kappa,
            output,
        } => commands::eigs(&input, kappa, output.as_deref()),
        Command::Dirichlet { input, output } => commands::dirichlet(&input, output.as_deref()),
        Command::Classify { input, output } => commands::classify(&input, output.as_deref()),
        Command::Inverse {
            input,
            starts,
            seed,
            output,
        } => commands::inverse(&input, starts, seed, output.as_deref()),
        Command::Reconstruct { input, output } => commands::reconstruct(&input, output.as_deref()),
        Command::Toda {
            input,
            t_end,
            step,
            output,
        } => commands::toda(&input, t_end, step, output.as_deref()),
        Command::Verify { input, seed } => verify::run(&input, seed),
        Command::Demo { name, starts } => demo::run(&name, starts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let run = || dispatch(cli.command);
    let result = match threads {
        Some(p) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(p).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => Err(CliError::Validation(format!(
                    "cannot build thread pool: {e}"
                ))),
            }
        }
        None => run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("computation failed: {msg}");
            ExitCode::from(2)
        }
    }
}
