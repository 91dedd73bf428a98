//! `polyclust`: exact counts, cluster expansions and certificates for
//! regular graphs read as graph6.
//!
//! Exit codes: 0 success, 1 alarms, 2 usage errors, 3 input format errors,
//! 4 computations refused (divergent regime or unmet precondition).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{FileConfig, RunConfig};

/// A failed run: message for standard error plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const ALARM: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const REFUSED: u8 = 4;

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: Self::USAGE,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: Self::INPUT,
            message: message.into(),
        }
    }

    pub fn alarm(message: impl Into<String>) -> Self {
        Failure {
            code: Self::ALARM,
            message: message.into(),
        }
    }
}

impl From<polyclust_core::Error> for Failure {
    fn from(e: polyclust_core::Error) -> Self {
        use polyclust_core::Error;
        let code = match e {
            Error::Graph6(_) => Failure::INPUT,
            Error::Spec { .. } => Failure::USAGE,
            _ => Failure::REFUSED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "polyclust", version, about = "Independent-set and matching counts of regular graphs, with certified cluster expansions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML file with defaults for bits, jobs, j_max and catalog_dir
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fractional bits for certified interval arithmetic [default: 128]
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Worker threads (0 = all cores) [default: 0]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest connected-graph catalogue that may be built [default: 7]
    #[arg(long, global = true)]
    j_max: Option<usize>,
    /// Directory caching the connected-graph catalogue
    #[arg(long, global = true, env = "POLYCLUST_CATALOG_DIR")]
    catalog_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// graph6 file (default: standard input)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Reject graphs with more vertices than this
    #[arg(long, default_value_t = 64)]
    pub max_vertices: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a named construction or a generated corpus
    Construct(ConstructArgs),
    /// Independence or matching profiles of graph6 input
    Count(CountArgs),
    /// CSV of homomorphism, injective and subgraph counts of patterns
    Census(CensusArgs),
    /// Polymer weights, exact Ξ_k and its truncated cluster expansion
    Expand(ExpandArgs),
    /// Certified comparison of i_k against a reference union
    Certify(CertifyArgs),
    /// Monomer-dimer clique comparison
    Mdcert(MdcertArgs),
    /// Coefficient-wise comparison of a corpus against a reference union
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Emit {
    Graph6,
    Edges,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Is,
    Match,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MdMode {
    Certify,
    Exact,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Spec string: kdd(d), clique(m), cycle(len), heawood, petersen, copies(<spec>,c)
    #[arg(long, conflicts_with_all = ["regular", "two_regular"])]
    pub spec: Option<String>,
    /// Generate every connected d-regular graph on this many vertices
    #[arg(long, requires = "degree")]
    pub regular: Option<usize>,
    /// Degree for --regular
    #[arg(long)]
    pub degree: Option<usize>,
    /// Girth filter for --regular
    #[arg(long, default_value_t = 3)]
    pub girth_min: usize,
    /// Include disconnected graphs with --regular
    #[arg(long)]
    pub disconnected: bool,
    /// Generate every 2-regular graph on this many vertices
    #[arg(long)]
    pub two_regular: Option<usize>,
    #[arg(long, value_enum, default_value_t = Emit::Graph6)]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long, value_enum, default_value_t = Kind::Is)]
    pub kind: Kind,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    /// Patterns: vertex, edge, path(j), cycle(j), star(l), clique(j); repeat or comma-separate
    #[arg(long, required = true, value_delimiter = ',')]
    pub pattern: Vec<String>,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Independent-set size
    #[arg(long)]
    pub k: usize,
    /// Truncation order (clusters of excess below t)
    #[arg(long, default_value_t = 4)]
    pub t: usize,
    /// Treat each input as this many disjoint copies (decimal integer)
    #[arg(long)]
    pub copies: Option<String>,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Reference spec H; H_n is n/|H| copies
    #[arg(long = "ref")]
    pub reference: String,
    /// Sizes to certify: `k` or `a..b` (inclusive)
    #[arg(long)]
    pub k: String,
    /// Truncation order [default: girth of the reference]
    #[arg(long)]
    pub t: Option<usize>,
    /// Treat each input as this many disjoint copies (decimal integer)
    #[arg(long)]
    pub copies: Option<String>,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct MdcertArgs {
    /// Activity as an exact rational, e.g. 1/2000
    #[arg(long)]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = MdMode::Certify)]
    pub mode: MdMode,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Reference spec H; each graph on n vertices is compared with n/|H| copies
    #[arg(long = "ref")]
    pub reference: String,
    #[arg(long, value_enum, default_value_t = Kind::Is)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
    pub direction: DirectionArg,
    /// Skip graphs of smaller girth
    #[arg(long)]
    pub girth_min: Option<usize>,
    /// Largest coefficient compared
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Strictness expected from this k on [default: girth of the reference]
    #[arg(long)]
    pub strict_from: Option<usize>,
    #[command(flatten)]
    pub input: InputArgs,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(file, g.bits, g.jobs, g.j_max, g.catalog_dir)?;
    polyclust_core::par::with_jobs(cfg.jobs, || match &cli.command {
        Command::Construct(a) => commands::construct(&cfg, a),
        Command::Count(a) => commands::count(&cfg, a),
        Command::Census(a) => commands::census(&cfg, a),
        Command::Expand(a) => commands::expand(&cfg, a),
        Command::Certify(a) => commands::certify(&cfg, a),
        Command::Mdcert(a) => commands::mdcert(&cfg, a),
        Command::Verify(a) => commands::verify(&cfg, a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Failure::USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("polyclust: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
