use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// Budgets and output options shared by every subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Completion stops after this many rules.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_rules: u64,
    /// Largest Cayley table that will be built.
    #[arg(long, global = true, default_value_t = 5_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_elements: u64,
    /// Search budget for enumerations (rows, oracle words).
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Write the Cayley table of the result to this file.
    #[arg(long, global = true)]
    pub emit_table: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "commsemi", version, about = "Finite commutative semigroup toolkit")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complete a presentation and list its normal forms.
    Complete { file: PathBuf },
    /// Archimedean components, kernels and nil posets.
    Structure {
        /// Presentation (`gens:` ...) or Cayley table file.
        file: Option<PathBuf>,
        /// Analyze (Z_n, *) instead of a file.
        #[arg(long, conflicts_with = "file")]
        zn: Option<u64>,
    },
    /// Exquisite exponents from C(m,n) to C(m',n').
    Exq { m: u64, n: u64, m2: u64, n2: u64 },
    /// Classify ideal extensions of C(m',n') by C(m,n) over all k.
    Extend {
        m: u64,
        n: u64,
        m2: u64,
        n2: u64,
        #[arg(long)]
        k: Option<u64>,
        /// Write the realizer's Cayley table (requires --k).
        #[arg(long, requires = "k")]
        emit: Option<PathBuf>,
    },
    /// Exquisite sets, composites and strong-semilattice counts of a frame.
    Frame { file: PathBuf },
    /// Smith normal form of a relation matrix.
    Abelian { file: PathBuf },
    /// Closure rows and the relatively free semilattice of an implication file.
    Rfsl { file: PathBuf },
    /// The multiplicative semigroup of Z_n.
    Zn { n: u64 },
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Complete { file } => commands::complete(cfg, file),
        Command::Structure { file, zn } => commands::structure(cfg, file.as_deref(), *zn),
        Command::Exq { m, n, m2, n2 } => commands::exq(cfg, *m, *n, *m2, *n2),
        Command::Extend { m, n, m2, n2, k, emit } => commands::extend(cfg, [*m, *n, *m2, *n2], *k, emit.as_deref()),
        Command::Frame { file } => commands::frame(cfg, file),
        Command::Abelian { file } => commands::abelian(cfg, file),
        Command::Rfsl { file } => commands::rfsl(cfg, file),
        Command::Zn { n } => commands::zn(cfg, *n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.config.format == Format::Json {
                println!("{}", e.to_json());
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
