//! `scwoltool`: validate scwols and complexes of groups, reduce words in their
//! fundamental groups, develop them, and probe coarse invariants.

mod commands;
mod union_config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SCWOLTOOL_THREADS";

#[derive(Parser, Debug)]
#[command(name = "scwoltool", version, about = "Complexes of groups, developments and coarse invariants at desk scale")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct WordOpts {
    /// Words a single reduction may visit before giving up.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a project file: scwol axioms, and the action or complex of groups if present.
    Validate {
        project: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Print the scwol and its 1-skeleton.
    Skeleton {
        project: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        out: Format,
    },
    /// Complex-of-groups commands.
    Cog {
        #[command(subcommand)]
        command: CogCommand,
    },
    /// Word commands in the fundamental group.
    Word {
        #[command(subcommand)]
        command: WordCommand,
    },
    /// Enumerate the development around the base vertex.
    Develop {
        project: PathBuf,
        /// Defaults to the project's `radius` parameter, then 3.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
        #[command(flatten)]
        words: WordOpts,
    },
    /// Elements moving the base vertex of the development at most `radius`.
    Stabilizer {
        project: PathBuf,
        /// Defaults to the project's `radius` parameter, then 3.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
        #[command(flatten)]
        words: WordOpts,
    },
    /// Compare the R-stabilizer with the loops of reduced length at most R.
    #[command(name = "prop1-check")]
    Prop1Check {
        project: PathBuf,
        /// Defaults to the project's `radius` parameter, then 3.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
        #[command(flatten)]
        words: WordOpts,
    },
    /// A ball in the fundamental group under the word metric, as metric JSON.
    Ball {
        project: PathBuf,
        /// Defaults to the project's `radius` parameter, then 3.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[command(flatten)]
        words: WordOpts,
    },
    /// Search for an asymptotic-dimension certificate at scale (R, D).
    Asdim {
        metric: PathBuf,
        /// The certificate has N + 1 families.
        #[arg(short = 'n', long = "families")]
        n: usize,
        /// Sets in one family must be more than R apart.
        #[arg(short = 'R', long = "scale")]
        scale: u32,
        /// Largest allowed set diameter.
        #[arg(short = 'D', long = "bound")]
        bound: u32,
        /// Search nodes per branch; 0 disables the limit.
        #[arg(long, default_value_t = 5_000_000)]
        node_limit: u64,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Ball-averaging property A witnesses for n = 1..=nmax.
    Propa {
        metric: PathBuf,
        #[arg(long)]
        nmax: u32,
        /// Variation is taken over pairs at distance at most K.
        #[arg(short = 'K', long = "K")]
        k: u32,
        /// Restrict the first point of each pair to points whose n-ball lies in B_radius(center).
        #[arg(long, requires = "radius")]
        center: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Run a Union Theorem or Finite Union Theorem harness described by a config file.
    #[command(name = "union-check")]
    UnionCheck {
        config: PathBuf,
        /// Search nodes per branch; 0 disables the limit.
        #[arg(long, default_value_t = 5_000_000)]
        node_limit: u64,
    },
    /// Full pipeline: validate, develop, stabilizer versus short loops, asdim probe, bound report, property A probe.
    Report {
        project: PathBuf,
        /// Largest radius; one block is printed for each of 0..=radius.
        #[arg(long)]
        radius: Option<u32>,
        /// Asdim scale R; defaults to the project's `scale`, then 3.
        #[arg(long = "scale")]
        scale: Option<u32>,
        /// Asdim bound D; defaults to the project's `bound`, then 3 R.
        #[arg(long = "bound")]
        bound: Option<u32>,
        /// Largest n of the property A profiles; defaults to the project's `nmax`, then 8.
        #[arg(long)]
        nmax: Option<u32>,
        /// Search nodes per branch; 0 disables the limit.
        #[arg(long, default_value_t = 5_000_000)]
        node_limit: u64,
        #[command(flatten)]
        words: WordOpts,
    },
}

#[derive(Subcommand, Debug)]
pub enum CogCommand {
    /// Check the complex-of-groups axioms.
    Validate {
        project: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Print the complex induced by the project's action (or by a separate action file) as a project file.
    Induce { project: PathBuf, action: Option<PathBuf> },
}

#[derive(Subcommand, Debug)]
pub enum WordCommand {
    /// Reduce a word; it is closed up to a loop at the base vertex through the maximal tree.
    Reduce {
        project: PathBuf,
        word: String,
        #[command(flatten)]
        words: WordOpts,
    },
    /// Decide whether two words represent the same element.
    Eq {
        project: PathBuf,
        u: String,
        v: String,
        #[command(flatten)]
        words: WordOpts,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
