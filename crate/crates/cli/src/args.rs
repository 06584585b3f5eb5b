use std::path::PathBuf;

use backresp::refine::{RefineHeuristic, SelectHeuristic};
use backresp::resp::DEFAULT_SHAPLEY_CAP;
use backresp::Mode;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "backresp",
    version,
    about = "Responsibility of states for a violated objective"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for the parallel parts (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Give up after this many seconds of wall-clock time.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub timeout_s: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact responsibility values over all players.
    Analyze(AnalyzeArgs),
    /// Partition refinement, then exact values over the responsible players.
    Refine(RefineArgs),
    /// Players with positive responsibility, without values.
    Positivity(PositivityArgs),
    /// Brute-force values by enumerating every coalition (small inputs only).
    Oracle(AnalyzeArgs),
    /// Write a synthetic model as an explicit document.
    Generate(GenerateArgs),
    /// Run an analysis and write its records or DOT document to a file.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
    Dot,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("run_source").args(["run", "find_run"])))]
#[command(group(ArgGroup::new("grouping").args(["groups", "group_by_module", "group_by_label", "no_groups"])))]
pub struct InputArgs {
    /// Explicit JSON document or module-language program.
    pub input: PathBuf,
    /// optimistic, pessimistic or forward.
    #[arg(long, default_value = "optimistic", value_parser = parse_mode)]
    pub mode: Mode,
    /// Objective override, e.g. `reach:goal`, `safety:s3,s4`, `parity:col`.
    #[arg(long, value_name = "KIND:ARG")]
    pub objective: Option<String>,
    /// Run override: prefix states then the loop in parentheses, e.g. `s0 s1 (s2 s3)`.
    #[arg(long)]
    pub run: Option<String>,
    /// Search for a violating run instead of using the one in the input.
    #[arg(long)]
    pub find_run: bool,
    /// Grouping file mapping block names to state names.
    #[arg(long, value_name = "FILE")]
    pub groups: Option<PathBuf>,
    /// One block per module, by the modules' owner predicates.
    #[arg(long)]
    pub group_by_module: bool,
    /// One block per combination of the given labels.
    #[arg(long, value_name = "LABELS", value_delimiter = ',')]
    pub group_by_label: Option<Vec<String>>,
    /// Ignore the groups stored in the input and use single states.
    #[arg(long)]
    pub no_groups: bool,
    /// Keep null players instead of pruning them before the analysis.
    #[arg(long)]
    pub no_prune: bool,
    /// Largest state space a program may expand to.
    #[arg(long, default_value_t = backresp::ingest::DEFAULT_STATE_CAP)]
    pub max_states: usize,
    /// Output layout.
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Most players for exact values.
    #[arg(long, default_value_t = DEFAULT_SHAPLEY_CAP)]
    pub shapley_cap: usize,
}

#[derive(Debug, Args)]
pub struct HeuristicArgs {
    /// Blocks of the random starting partition.
    #[arg(long, default_value_t = 1)]
    pub initial_blocks: usize,
    /// Block to split: random, max-delta, min-delta or min-frontier.
    #[arg(long, default_value = "random", value_parser = parse_select)]
    pub select: SelectHeuristic,
    /// State to split off: random, frontier-random, frontier-max,
    /// frontier-losing, frontier-winning or frontier-lowest.
    #[arg(long, default_value = "frontier-random", value_parser = parse_refine)]
    pub refine: RefineHeuristic,
    /// Seed for the starting partition and random choices.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Most candidate blocks an exhaustive witness search may range over.
    #[arg(long, default_value_t = 24)]
    pub block_cap: usize,
    /// Most games the refinement may solve.
    #[arg(long)]
    pub max_games: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub heuristics: HeuristicArgs,
    /// Most players for exact values.
    #[arg(long, default_value_t = DEFAULT_SHAPLEY_CAP)]
    pub shapley_cap: usize,
    /// Print the refinement trace, one line per iteration.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Args)]
pub struct PositivityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub heuristics: HeuristicArgs,
    /// Order run states by reachability in the original system.
    #[arg(long)]
    pub preorder_literal: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// One of the synthetic families.
    pub family: String,
    /// Family size parameter.
    pub size: usize,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub heuristics: HeuristicArgs,
    /// Use refinement before the exact values.
    #[arg(long = "via-refine")]
    pub via_refine: bool,
    /// Most players for exact values.
    #[arg(long, default_value_t = DEFAULT_SHAPLEY_CAP)]
    pub shapley_cap: usize,
    /// File to write.
    #[arg(long, short)]
    pub output: PathBuf,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_select(s: &str) -> Result<SelectHeuristic, String> {
    s.parse()
}

fn parse_refine(s: &str) -> Result<RefineHeuristic, String> {
    s.parse()
}
