//! `momentlab`: exact tables, factorial moments, transfer estimates,
//! simulations and convergence reports.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momentlab::{Error, Model};

/// Exit status for invalid arguments.
pub const EXIT_INVALID: u8 = 2;
/// Exit status when a row limit or oracle budget is exceeded.
pub const EXIT_LIMIT: u8 = 3;
/// Exit status when `verify` finds a failing cross-check.
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "momentlab",
    version,
    about = "Exact and asymptotic factorial moments of cycles, inversions and quicksort comparisons",
    after_help = "All logarithms are natural logarithms (ln), never log2.\n\
                  MOMENTLAB_ROW_LIMIT overrides the row caps: either one number for all models \
                  or e.g. `cycles=8000,quicksort=60`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact distribution row {k, count} for one n.
    Table {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact and/or asymptotic factorial moment β_s(n).
    Moment {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = MomentMode::Both)]
        mode: MomentMode,
        #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
        precision: PrecisionArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Transfer estimate of [u^n] (1-u)^-alpha ln^beta(1/(1-u)) against the exact series.
    Transfer {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long)]
        n: u64,
        /// Keep only bracket terms up to this order.
        #[arg(long)]
        order_limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
        precision: PrecisionArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of β_s(n).
    Simulate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        /// Worker threads (0 = all cores); the result does not depend on it.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convergence report of the two-term asymptotic against exact β_s(n).
    Compare {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        s: u32,
        /// Comma-separated list of n values.
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<u64>,
        #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
        precision: PrecisionArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-check transferred expansions against the stated coefficients (s ≤ 10).
    Verify {
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Cycles,
    Inversions,
    Quicksort,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cycles => Model::Cycles,
            ModelArg::Inversions => Model::Inversions,
            ModelArg::Quicksort => Model::Quicksort,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentMode {
    Exact,
    Asym,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    High,
}

impl From<PrecisionArg> for momentlab::transfer::Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Self::Double,
            PrecisionArg::High => Self::High,
        }
    }
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LimitExceeded { .. } | Error::BudgetExceeded(_) | Error::OrderExceeded { .. } => EXIT_LIMIT,
            Error::RowSumMismatch { .. } | Error::InvalidArgument(_) => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

/// A rendered report plus the exit status it should leave behind.
struct Outcome {
    report: report::Report,
    format: Format,
    code: u8,
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let limits = momentlab::RowLimits::from_env()?;
    let ok = |report, out: OutputArgs| Outcome { report, format: out.format, code: 0 };
    Ok(match cli.command {
        Command::Table { model, n, out } => ok(commands::table(model.into(), n, &limits)?, out),
        Command::Moment { model, n, s, mode, precision, out } => {
            ok(commands::moment(model.into(), n, s, mode, precision.into(), &limits)?, out)
        }
        Command::Transfer { alpha, beta, n, order_limit, precision, out } => {
            ok(commands::transfer(alpha, beta, n, order_limit, precision.into())?, out)
        }
        Command::Simulate { model, n, s, trials, seed, threads, out } => {
            ok(commands::simulate(model.into(), n, s, trials, seed, threads)?, out)
        }
        Command::Compare { model, s, n_grid, precision, out } => {
            ok(commands::compare(model.into(), s, &n_grid, precision.into(), &limits)?, out)
        }
        Command::Verify { out } => {
            let (report, passed) = commands::verify()?;
            let code = if passed { 0 } else { EXIT_VERIFY };
            Outcome { report, format: out.format, code }
        }
    })
}

fn emit(report: &report::Report, format: Format) {
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    let _ = stdout.flush();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            emit(&outcome.report, outcome.format);
            if outcome.code != 0 {
                eprintln!("momentlab: coefficient cross-check failed");
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("momentlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
