mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsaw_core::arith::{parse_rational, BigRational};

use crate::output::Record;

#[derive(Parser, Debug)]
#[command(name = "gsaw", version, about = "Trapping statistics of growing self-avoiding walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact trapping distribution, moments and decay rate of a ladder model.
    Exact(ExactArgs),
    /// Monte Carlo histograms on a ladder or an infinite lattice.
    Simulate(SimulateArgs),
    /// Exhaustive enumeration of all walks up to a step budget.
    Enumerate(EnumerateArgs),
    /// Trapping probabilities from the linear recursions.
    Recur(RecurArgs),
    /// Per-step exact differences between generating function, recursion and enumeration.
    Compare(CompareArgs),
    /// Exact mean trapping length and decay rate over a range of C.
    SweepBias(SweepArgs),
    /// Resolution of the inconsistent published closed forms.
    Errata(ErrataArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum ExecutionArg {
    Parallel,
    Sequential,
}

impl From<ExecutionArg> for gsaw_core::sim::Execution {
    fn from(e: ExecutionArg) -> Self {
        match e {
            ExecutionArg::Parallel => Self::Parallel,
            ExecutionArg::Sequential => Self::Sequential,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Variant {
    Printed,
    Corrected,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Accepts `1000000`, `1_000_000` or `1e6`.
fn count(s: &str) -> Result<u64, String> {
    let t = s.replace('_', "");
    if let Ok(n) = t.parse::<u64>() {
        return Ok(n);
    }
    match parse_rational(&t) {
        Ok(r) if r.is_integer() && r >= BigRational::from_integer(0.into()) => r
            .to_integer()
            .try_into()
            .map_err(|_| format!("{s} is too large")),
        _ => Err(format!("{s} is not a non-negative integer")),
    }
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    #[arg(long = "C", value_parser = rational, default_value = "1")]
    pub c: BigRational,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub lattice: String,
    #[arg(long, value_parser = count, default_value = "1000000")]
    pub walks: u64,
    #[arg(long, value_parser = count, default_value = "1")]
    pub seed: u64,
    #[arg(long = "C", value_parser = rational, default_value = "1")]
    pub c: BigRational,
    #[arg(long, value_parser = count, default_value = "8")]
    pub streams: u64,
    /// Half-width of the bounding box on infinite lattices (256 gives a 512 x 512 box).
    #[arg(long, default_value_t = gsaw_core::sim::DEFAULT_BOX_HALF_WIDTH)]
    pub box_half_width: i32,
    #[arg(long, value_enum, default_value = "parallel")]
    pub execution: ExecutionArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 15)]
    pub n_max: usize,
    #[arg(long = "C", value_parser = rational, default_value = "1")]
    pub c: BigRational,
    #[arg(long, value_enum, default_value = "parallel")]
    pub execution: ExecutionArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct RecurArgs {
    /// `square` or `triangular`.
    #[arg(long)]
    pub which: String,
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: Variant,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 15)]
    pub n_max: usize,
    #[arg(long = "C", value_parser = rational, default_value = "1")]
    pub c: BigRational,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: Variant,
    #[arg(long, value_enum, default_value = "parallel")]
    pub execution: ExecutionArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "square-two-sided")]
    pub model: String,
    #[arg(long, value_parser = rational, default_value = "0.2")]
    pub from: BigRational,
    #[arg(long, value_parser = rational, default_value = "6")]
    pub to: BigRational,
    #[arg(long, value_parser = rational, default_value = "0.01")]
    pub step: BigRational,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ErrataArgs {
    #[arg(long, default_value_t = 15)]
    pub n_max: usize,
    /// Walks used to corroborate the width variance.
    #[arg(long, value_parser = count, default_value = "200000")]
    pub walks: u64,
    #[arg(long, value_parser = count, default_value = "1")]
    pub seed: u64,
    #[arg(long, value_parser = count, default_value = "8")]
    pub streams: u64,
    #[arg(long, value_enum, default_value = "parallel")]
    pub execution: ExecutionArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug)]
pub enum CliError {
    /// Rejected flags or flag combinations; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Failed(String),
}

fn emit(record: &Record, common: &Common) -> io::Result<()> {
    let sink: Box<dyn Write> = match &common.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match common.format {
        Format::Json => record.write_json(&mut w)?,
        Format::Csv => record.write_csv(&mut w).map_err(io::Error::other)?,
    }
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = match &cli.command {
        Command::Exact(a) => (commands::exact(a), &a.common),
        Command::Simulate(a) => (commands::simulate(a), &a.common),
        Command::Enumerate(a) => (commands::enumerate(a), &a.common),
        Command::Recur(a) => (commands::recur(a), &a.common),
        Command::Compare(a) => (commands::compare(a), &a.common),
        Command::SweepBias(a) => (commands::sweep_bias(a), &a.common),
        Command::Errata(a) => (commands::errata(a), &a.common),
    };
    match result {
        Ok(record) => match emit(&record, common) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("gsaw: cannot write output: {e}");
                ExitCode::FAILURE
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("gsaw: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("gsaw: {msg}");
            ExitCode::FAILURE
        }
    }
}
