use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::charspec::parse_char_spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Factored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Direct,
    Transformed,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "poincare",
    version,
    about = "Twisted Kloosterman sums, Poincare series norms and their second moments",
    after_help = "Characters are addressed as (q, index): --q Q --chi-index I, or --chi Q:I. \
Index 0 is the principal character; the order is fixed by the generators of (Z/qZ)^*.\n\
A --config file holds `flag = value` lines (e.g. `k = 12`, `format = json`); \
flags given on the command line override it."
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write results here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// key = value file pre-setting any flag
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads for scans, moments and suites (results do not depend on it)
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub workers: Option<u32>,
    /// Relative tolerance for the Delta series truncation
    #[arg(long = "rel-tol", global = true, default_value_t = 1e-12, value_parser = positive_real)]
    pub rel_tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn char_spec(s: &str) -> Result<(u64, u64), String> {
    parse_char_spec(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct CharArgs {
    /// Character modulus
    #[arg(long, value_name = "Q")]
    pub q: Option<u64>,
    /// Character index mod q
    #[arg(long = "chi-index", value_name = "I")]
    pub chi_index: Option<u64>,
    /// Character as Q:I
    #[arg(long, value_name = "Q:I", value_parser = char_spec, conflicts_with_all = ["q", "chi_index"])]
    pub chi: Option<(u64, u64)>,
}

impl CharArgs {
    pub fn resolve(&self) -> (u64, u64) {
        self.chi.unwrap_or((self.q.unwrap_or(1), self.chi_index.unwrap_or(0)))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Twisted Kloosterman sum S_chi(m, n; c) and its Weil bound
    Kloosterman {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Full modulus; must be a multiple of q
        #[arg(long)]
        c: u64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Factored)]
        method: MethodArg,
    },
    /// Squared Petersson norm of the normalized Poincare series
    Norm {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
    },
    /// Norms over weights K < k < 2K
    #[command(name = "scan-k")]
    ScanK {
        #[arg(long = "K")]
        big_k: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Scan weights of this parity instead of the character's own
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        parity: Option<u8>,
    },
    /// Norms over indices M < m < 2M
    #[command(name = "scan-m")]
    ScanM {
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Second moment over weights, directly and through the Bessel transform
    #[command(name = "moment-k")]
    MomentK {
        #[arg(long = "K")]
        big_k: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
        /// Scales the (c1, c2) range of the transformed route
        #[arg(long = "cutoff-mult", default_value_t = 1.0)]
        cutoff_mult: f64,
    },
    /// Second moment over indices, directly and through Poisson summation
    #[command(name = "moment-m")]
    MomentM {
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
        #[arg(long = "cutoff-mult", default_value_t = 1.0)]
        cutoff_mult: f64,
    },
    /// Run a verification suite (weil, neumann, ncount, vcount, sums, cross, all)
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Ramanujan tau(n), or tau(1..=n) with --all
    Tau {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        all: bool,
    },
}
