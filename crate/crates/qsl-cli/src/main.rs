//! `qsl` — coherence measures, minimum evolution times, speed-limit bounds,
//! and translationally invariant channels from the command line.
//!
//! Exit codes: 0 success, 2 parse/IO error, 3 validation error,
//! 4 property violation.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Error classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unparseable input, or an output that cannot be written.
    Parse(String),
    /// Structurally valid input rejected by the numeric validators.
    Validation(qsl_core::Error),
    /// Parameter outside its documented domain.
    Invalid(String),
    /// A verified property failed beyond tolerance.
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) | CliError::Invalid(_) => 3,
            CliError::Violation(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Validation(e) => write!(f, "validation error: {e}"),
            CliError::Invalid(msg) => write!(f, "validation error: {msg}"),
            CliError::Violation(msg) => write!(f, "property violation: {msg}"),
        }
    }
}

/// Report output format.
#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    /// Structured report with the effective tolerances echoed inline.
    Json,
    /// Fixed-column row (tolerances echoed on stderr).
    Csv,
}

#[derive(Parser)]
#[command(
    name = "qsl",
    version,
    about = "Coherence/asymmetry measures, minimum evolution times, quantum speed limits, and translationally invariant channels"
)]
struct Cli {
    /// JSON file with tolerance overrides (defaults otherwise).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveArgs {
    /// Search horizon override (default 50π/ΔE).
    #[arg(long)]
    horizon: Option<f64>,
    /// Crossing-time tolerance override (default 1e-6/spread(H)).
    #[arg(long = "t-tol")]
    t_tol: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Asymmetry/coherence measures of a state relative to its Hamiltonian.
    Measures {
        /// Problem file (hamiltonian + state).
        #[arg(long)]
        input: PathBuf,
        /// Dyson orders to evaluate (s in (0,1) ∪ (1,2]).
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        orders: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimum time for the orbit to reach distinguishability ε.
    Tau {
        /// Problem file (hamiltonian + state).
        #[arg(long)]
        input: PathBuf,
        /// trace | renyi:<s> | infidelity | perp
        #[arg(long)]
        measure: String,
        /// Distinguishability target.
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// All four speed-limit bounds against the solved crossing times.
    Bounds {
        /// Problem file (hamiltonian + state).
        #[arg(long)]
        input: PathBuf,
        /// Trace-distance target for the ε/F_H bound.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Rényi divergence target for the Rényi bound.
        #[arg(long = "epsilon-renyi", default_value_t = 1.0)]
        epsilon_renyi: f64,
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CSV scan of t ↦ D(ρ, ρ(t)) for plotting.
    Orbit {
        /// Problem file (hamiltonian + state).
        #[arg(long)]
        input: PathBuf,
        /// trace | renyi:<s> | infidelity | perp
        #[arg(long)]
        measure: String,
        /// Largest sample time.
        #[arg(long = "t-max")]
        t_max: f64,
        /// Number of equally spaced samples (>= 2), including t = 0.
        #[arg(long)]
        steps: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random TI channels and their verification.
    #[command(subcommand)]
    Channel(ChannelCommand),
    /// Randomized monotonicity/convexity property suites.
    MonotoneSuite {
        /// Base RNG seed; trial seeds derive deterministically from it.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trials per property (>= 1).
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// System dimensions to cycle through.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        /// Replace one trial's channel by a non-TI unitary to demonstrate
        /// violation reporting (exits 4).
        #[arg(long)]
        inject_non_ti: bool,
    },
}

#[derive(Subcommand)]
enum ChannelCommand {
    /// Sample an energy-conserving dilation and emit channel + dilation files.
    Random {
        /// System (= environment) dimension, >= 2.
        #[arg(long)]
        dims: usize,
        #[arg(long)]
        seed: u64,
        /// Output directory for channel.json and dilation.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check covariance, harmonic structure, and per-Kraus incoherence.
    Verify {
        /// Channel file (kraus + optional omega).
        #[arg(long)]
        channel: PathBuf,
        /// Hamiltonian file (bare matrix or problem file).
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Sample times for the covariance/harmonic checks.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tols = io::load_tolerances(cli.config.as_deref())?;
    match cli.command {
        Command::Measures {
            input,
            orders,
            output,
        } => commands::cmd_measures(&input, &orders, output.format, output.out.as_deref(), &tols),
        Command::Tau {
            input,
            measure,
            epsilon,
            solve,
            output,
        } => commands::cmd_tau(
            &input,
            &measure,
            epsilon,
            solve.horizon,
            solve.t_tol,
            output.format,
            output.out.as_deref(),
            &tols,
        ),
        Command::Bounds {
            input,
            epsilon,
            epsilon_renyi,
            solve,
            output,
        } => commands::cmd_bounds(
            &input,
            epsilon,
            epsilon_renyi,
            solve.horizon,
            solve.t_tol,
            output.format,
            output.out.as_deref(),
            &tols,
        ),
        Command::Orbit {
            input,
            measure,
            t_max,
            steps,
            out,
        } => commands::cmd_orbit(&input, &measure, t_max, steps, out.as_deref(), &tols),
        Command::Channel(ChannelCommand::Random { dims, seed, out }) => {
            commands::cmd_channel_random(dims, seed, &out, &tols)
        }
        Command::Channel(ChannelCommand::Verify {
            channel,
            hamiltonian,
            times,
            out,
        }) => commands::cmd_channel_verify(
            &channel,
            &hamiltonian,
            times.as_deref(),
            out.as_deref(),
            &tols,
        ),
        Command::MonotoneSuite {
            seed,
            trials,
            dims,
            inject_non_ti,
        } => commands::cmd_monotone_suite(seed, trials as usize, &dims, inject_non_ti, &tols),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
