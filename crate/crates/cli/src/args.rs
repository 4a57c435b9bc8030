use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ciani", version, about = "Superspecial Ciani quartics over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on one curve.
    Analyze(AnalyzeArgs),
    /// List every nonsingular superspecial curve over F_{p^2}.
    Enumerate(EnumerateArgs),
    /// Scan F_{p^4} for superspecial curves with coefficients outside F_{p^2}.
    ScanExt(ScanExtArgs),
    /// Count the projective points of one curve by brute force.
    Count(CountArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Tower level: 1, 2 or 4.
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    /// Quadratic non-residue of F_p used to build F_{p^2}.
    #[arg(long)]
    pub d: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct WorkerArgs {
    /// Worker threads (default: all available cores).
    #[arg(long, env = "CIANI_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Also count points by brute force and cross-check the verdict.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Verify superspecial curves against brute-force point counts.
    #[arg(long)]
    pub oracle: bool,
    /// Verify at most this many curves, drawn at random (default: all).
    #[arg(long)]
    pub sample: Option<usize>,
    /// Seed for the oracle sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow scans beyond the default budget.
    #[arg(long)]
    pub yes_i_know: bool,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanExtArgs {
    #[arg(long)]
    pub p: u64,
    /// Tower level of the scanned field; must be 4.
    #[arg(long, default_value_t = 4)]
    pub deg: u32,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub yes_i_know: bool,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub workers: WorkerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
