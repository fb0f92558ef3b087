//! Command-line front end: deterministic subcommands over the core
//! library, with table/CSV/JSON output.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! gate failure. The seed resolves as `--seed` flag, then the
//! `MACROCAT_SEED` environment variable, then the built-in default;
//! identical flags and seed produce byte-identical output.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod fig1;
pub mod report;
pub mod verify;

pub use commands::GameKind;
pub use report::{OutputFormat, Report};

/// Default RNG seed when neither the flag nor the environment sets one.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Environment variable overriding the default seed (decimal or 0x-hex).
pub const SEED_ENV_VAR: &str = "MACROCAT_SEED";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Gate(String),
    /// Gate failure that still has a report to print first.
    GateWithReport(Report, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Gate(_) | CliError::GateWithReport(..) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Gate(m) => m,
            CliError::GateWithReport(_, m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "macrocat",
    version,
    about = "Two-mode squeezed-state statistics, guessing-game analysis, effective-size measures, and a lossy cavity amplifier"
)]
pub struct Cli {
    /// RNG seed (overrides MACROCAT_SEED and the default).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: OutputFormat,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Print the resolved configuration to standard error.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Squeezed-state statistics, optionally after loss and noise.
    State {
        /// Squeezing parameter.
        #[arg(long)]
        g: f64,
        /// Loss transmission applied to both modes.
        #[arg(long)]
        eta: Option<f64>,
        /// Quadrature-noise variance applied to both modes along x.
        #[arg(long)]
        dh: Option<f64>,
    },
    /// Guessing game: analytic vs Monte Carlo, with the σ_max table.
    Game {
        #[arg(long, value_enum)]
        kind: GameKind,
        /// Squeezing parameter (tms game).
        #[arg(long)]
        g: Option<f64>,
        /// Cat amplitude (cat game).
        #[arg(long)]
        alpha: Option<f64>,
        /// Detector noise spread.
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Target guess probability for the σ_max table.
        #[arg(long, default_value_t = 0.75)]
        p_target: f64,
    },
    /// Ingest an experiment CSV and emit the effective-size table.
    Ingest {
        /// Input CSV path.
        path: PathBuf,
        /// Treat the input as a previously emitted table and rebuild
        /// its derived columns.
        #[arg(long)]
        recompute: bool,
    },
    /// Squeezed/anti-squeezed variance sweep of the lossy amplifier.
    Cavity {
        /// Gain rate.
        #[arg(long)]
        chi: f64,
        /// Loss rate.
        #[arg(long)]
        lambda: f64,
        /// Sweep end time.
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        /// Number of sweep intervals.
        #[arg(long, default_value_t = 30)]
        steps: usize,
    },
    /// Grid-state decoherence analysis: ideal vs decohered variances.
    Coherence {
        /// Squeezing parameter of the test wavefunction.
        #[arg(long, default_value_t = 0.4)]
        g: f64,
        /// Gaussian envelope width on mode 1 (needs --gamma2).
        #[arg(long)]
        gamma1: Option<f64>,
        /// Gaussian envelope width on mode 2 (needs --gamma1).
        #[arg(long)]
        gamma2: Option<f64>,
        /// Step-envelope half-width (mutually exclusive with gammas).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Grid points per axis (power of two).
        #[arg(long, default_value_t = 256)]
        points: usize,
        /// Grid half-range.
        #[arg(long, default_value_t = 8.0)]
        half_range: f64,
    },
    /// Effective-size measures from g, a measured variance, or a cat
    /// amplitude.
    Neff {
        /// Squeezing parameter (exact pure-state evaluation).
        #[arg(long)]
        g: Option<f64>,
        /// Measured squeezed-combination variance (lower bounds).
        #[arg(long)]
        v_minus: Option<f64>,
        /// Cat intensity |α|² (closed form).
        #[arg(long)]
        alpha_sq: Option<f64>,
    },
    /// Run the cross-representation oracle suite; nonzero exit on any
    /// tolerance breach.
    Verify,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(text) => {
            let text = text.trim();
            let parsed = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
                u64::from_str_radix(hex, 16)
            } else {
                text.parse::<u64>()
            };
            parsed.map_err(|_| {
                CliError::Usage(format!("{SEED_ENV_VAR} must be a u64, got `{text}`"))
            })
        }
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::State { .. } => "state",
        Command::Game { .. } => "game",
        Command::Ingest { .. } => "ingest",
        Command::Cavity { .. } => "cavity",
        Command::Coherence { .. } => "coherence",
        Command::Neff { .. } => "neff",
        Command::Verify => "verify",
    }
}

/// Execute a parsed invocation, returning the rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let seed = resolve_seed(cli.seed)?;
    if cli.verbose {
        eprintln!(
            "config: command={} seed={seed} format={:?} output={}",
            command_name(&cli.command),
            cli.format,
            cli.output
                .as_ref()
                .map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
        );
    }
    let report = match &cli.command {
        Command::State { g, eta, dh } => commands::cmd_state(*g, *eta, *dh)?,
        Command::Game { kind, g, alpha, sigma, samples, p_target } => {
            commands::cmd_game(*kind, *g, *alpha, *sigma, *samples, *p_target, seed)?
        }
        Command::Ingest { path, recompute } => {
            let path = path
                .to_str()
                .ok_or_else(|| CliError::Usage("path must be valid UTF-8".into()))?;
            commands::cmd_ingest(path, *recompute)?
        }
        Command::Cavity { chi, lambda, t_max, steps } => {
            commands::cmd_cavity(*chi, *lambda, *t_max, *steps)?
        }
        Command::Coherence { g, gamma1, gamma2, epsilon, points, half_range } => {
            commands::cmd_coherence(*g, *gamma1, *gamma2, *epsilon, *points, *half_range)?
        }
        Command::Neff { g, v_minus, alpha_sq } => commands::cmd_neff(*g, *v_minus, *alpha_sq)?,
        Command::Verify => commands::cmd_verify(seed)?,
    };
    Ok(report.render(cli.format))
}

fn deliver(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Data(e.to_string()))
        }
    }
}

/// Full run for a raw argument list; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => match deliver(&cli, &text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {}", e.message());
                e.exit_code()
            }
        },
        Err(CliError::GateWithReport(report, message)) => {
            let text = report.render(cli.format);
            let _ = deliver(&cli, &text);
            eprintln!("error: {message}");
            3
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
