use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rainbow_core::search::DEFAULT_NODE_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "rainbow", version, about = "Count colorings without rainbow arithmetic progressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: u64,

    /// Node budget for each search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Append-only result cache.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// Ignore cached values, recompute, and check them against the cache.
    #[arg(long, global = true)]
    pub recompute: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dfs,
    Symmetric,
    Formula,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of r-colorings with no rainbow k-AP.
    Count(CountArgs),
    /// Anti-van der Waerden number.
    Aw(AwArgs),
    /// Doubling/negation orbits of Z_p.
    Orbits(OrbitsArgs),
    /// Run verification campaigns; exits 4 on any failed check.
    Verify(VerifyArgs),
    /// Time the search methods on one job.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
pub struct StructureArgs {
    /// The interval [N].
    #[arg(long, value_name = "N", required_unless_present = "cyclic", conflicts_with = "cyclic")]
    pub interval: Option<usize>,

    /// The cyclic group Z_N.
    #[arg(long, value_name = "N")]
    pub cyclic: Option<usize>,

    /// Restrict to these elements.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "minus")]
    pub elements: Option<Vec<usize>>,

    /// Remove these elements.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub minus: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    /// Number of colors.
    #[arg(short = 'r', long = "colors", value_parser = clap::value_parser!(u64).range(1..=32))]
    pub r: u64,

    /// Progression length.
    #[arg(short = 'k', default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
    pub k: u64,

    #[arg(long, value_enum, default_value_t = MethodArg::Dfs)]
    pub method: MethodArg,

    /// Count only colorings onto a fixed set of this many colors.
    #[arg(long, value_name = "S", value_parser = clap::value_parser!(u64).range(1..))]
    pub exact: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AwArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    #[arg(short = 'k', default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
    pub k: u64,
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    /// An odd prime.
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Exhaustive counts of Z_p against the exact prime formula.
    #[arg(long, alias = "thm5")]
    pub prime_formula: bool,

    /// The number-theoretic test for aw(Z_n,3) = 3 against search.
    #[arg(long, alias = "lemma7")]
    pub aw_characterization: bool,

    /// aw(Z_p,3) lies in {3,4} for odd primes.
    #[arg(long)]
    pub aw_prime_range: bool,

    /// g_3(Z_n) equals the two-color count exactly in the aw = 3 regime.
    #[arg(long, alias = "eq1")]
    pub cyclic_lower_bound: bool,

    /// The product recurrence bound on g_3(Z_np), for --pairs.
    #[arg(long, alias = "cor6")]
    pub product_bound: bool,

    /// Proper subsets of [n] have fewer rainbow-free colorings.
    #[arg(long, alias = "thm4")]
    pub subset_monotonicity: bool,

    /// Share of three-color colorings of [n] (below 2% at n=14, decreasing on 10..=14).
    #[arg(long)]
    pub three_color_share: bool,

    /// Rainbow hypergraph statistics for n in 7..=max-n.
    #[arg(long)]
    pub hypergraph: bool,

    /// Random instances of the pair-count inequalities.
    #[arg(long, alias = "props")]
    pub pair_bounds: bool,

    /// Orbit decomposition invariants and the formula identity.
    #[arg(long, alias = "orbits")]
    pub orbit_invariants: bool,

    /// Every campaign at its default range.
    #[arg(long)]
    pub all: bool,

    /// Largest prime (default 13 for search campaigns, 2000 for orbits).
    #[arg(long)]
    pub max_p: Option<u64>,

    /// Largest n (default 20; 10 for subsets; 40 for the hypergraph; 60 for pair bounds).
    #[arg(long)]
    pub max_n: Option<usize>,

    /// Color counts (default 3; 3,4,5 for the hypergraph).
    #[arg(short = 'r', long = "colors", value_delimiter = ',')]
    pub r: Option<Vec<usize>>,

    /// (n,p) pairs for the product bound, e.g. `1,3 2,3`.
    #[arg(long, num_args = 1.., value_parser = parse_pair)]
    pub pairs: Vec<(u64, u64)>,

    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected n,p, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    #[arg(short = 'r', long = "colors", value_parser = clap::value_parser!(u64).range(1..=32))]
    pub r: u64,

    #[arg(short = 'k', default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
    pub k: u64,

    /// Runs per method.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=100))]
    pub repeat: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitions_are_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("2,3"), Ok((2, 3)));
        assert!(parse_pair("2").is_err());
        assert!(parse_pair("a,3").is_err());
    }
}
