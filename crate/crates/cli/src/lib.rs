//! Command-line front end: instance and schedule files, generators, the
//! solvers and the agreement benchmark.
//!
//! Exit codes: 0 for YES, a valid schedule or success; 1 for NO, an
//! invalid schedule or a benchmark disagreement; 2 for UNKNOWN; 64 for
//! usage, input and parse errors; 70 for internal solver failures.

pub mod commands;
pub mod format;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "tedsc", version, about = "Temporally edge-disjoint schedule completion toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an instance and optionally write the witness schedule.
    Solve(SolveArgs),
    /// Check a schedule against an instance.
    Validate {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Generate an instance and its ground-truth sidecar.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the approximation for the fewest walks under the bound.
    Approx {
        instance: PathBuf,
        /// Write the schedule here (`-` for stdout).
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Decide an instance by exhaustive search, within caps.
    Oracle(OracleArgs),
    /// Compare all solvers against the oracle on an exhaustive corpus.
    Bench {
        #[arg(long, value_enum, default_value_t = Corpus::Small)]
        corpus: Corpus,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// `flow` for unconstrained instances, `fpt-kh` otherwise.
    Auto,
    Flow,
    FptKh,
    XpK,
    Star,
    Oracle,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Corpus {
    Small,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Unconstrained,
    Length,
    Lifespan,
}

impl From<VariantArg> for tedsc::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Unconstrained => tedsc::Variant::Unconstrained,
            VariantArg::Length => tedsc::Variant::Length,
            VariantArg::Lifespan => tedsc::Variant::Lifespan,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Search budget for `fpt-kh` and `xp-k`; exhausting it gives UNKNOWN.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Write the witness schedule here (`-` for stdout).
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub max_vertices: Option<usize>,
    #[arg(long)]
    pub max_span: Option<u64>,
    #[arg(long)]
    pub max_demands: Option<usize>,
    #[arg(long)]
    pub max_walks: Option<usize>,
    /// Print the fewest walks instead of deciding the instance's `k`.
    #[arg(long)]
    pub min_walks: bool,
}

/// Where generated files go.
#[derive(Debug, Args)]
pub struct Output {
    /// Instance path; the sidecar gets the `.truth` extension. Without it
    /// the instance goes to stdout and the truth line to stderr.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the JSON mirror instead of the text format.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Encode a CNF formula given in DIMACS format.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[command(flatten)]
        out: Output,
    },
    /// Encode edge-disjoint paths on a DAG.
    Edp {
        /// Number of DAG vertices.
        #[arg(long)]
        n: usize,
        /// Edges as `u-v`, comma separated.
        #[arg(long)]
        edges: String,
        /// Terminal pairs as `s-z`, comma separated.
        #[arg(long)]
        pairs: String,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[command(flatten)]
        out: Output,
    },
    /// Encode unary bin packing on a path of three vertices.
    Binpack {
        /// Item sizes, comma separated.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        cap: u64,
        #[command(flatten)]
        out: Output,
    },
    /// A seeded random instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        demands: usize,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
        }
    };
    match commands::execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
