use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "satrl", about = "Natural language to CNF, and CDCL with a learned branching policy", disable_version_flag = true)]
pub struct Cli {
    /// Print the tool version and the checkpoint, feature and CSV schema versions.
    #[arg(short = 'V', long)]
    pub version: bool,
    /// Log progress and print the effective configuration.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile English text or an expression file to DIMACS CNF.
    Convert(ConvertArgs),
    /// Solve a DIMACS file. Exits 10 on SAT, 20 on UNSAT, 0 when undecided.
    Solve(SolveArgs),
    /// Train a branching policy with PPO on a directory of same-shape instances.
    Train(TrainArgs),
    /// Print the global feature vector of a DIMACS file as name=value lines.
    Features {
        file: Option<PathBuf>,
        /// Print the feature names and schema version instead.
        #[arg(long)]
        schema: bool,
    },
    /// Compare VSIDS with a trained policy on a dataset.
    Bench(BenchArgs),
    /// Write satisfiable uniform random 3-SAT instances.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputMode {
    English,
    Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslatorSpec {
    Stub(PathBuf),
    Http,
}

fn parse_translator(s: &str) -> Result<TranslatorSpec, String> {
    match s.split_once(':') {
        Some(("stub", path)) if !path.is_empty() => Ok(TranslatorSpec::Stub(path.into())),
        None if s == "http" => Ok(TranslatorSpec::Http),
        _ => Err("expected `stub:FILE` or `http`".into()),
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Input file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputMode::English)]
    pub mode: InputMode,
    /// `stub:FILE` for a fixture table or `http` for the live client.
    #[arg(long, value_parser = parse_translator)]
    pub translator: Option<TranslatorSpec>,
    /// Endpoint of the HTTP translator.
    #[arg(long, env = "SATRL_TRANSLATOR_ENDPOINT")]
    pub endpoint: Option<String>,
    #[arg(long, default_value = "o1-mini")]
    pub model: String,
    /// DIMACS output; standard output when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Symbol map output (`atom<TAB>index<TAB>phrase`); defaults to `<out>.symbols.tsv`.
    #[arg(long)]
    pub symbols: Option<PathBuf>,
    /// Skip CNF simplification.
    #[arg(long)]
    pub no_simplify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicKind {
    Vsids,
    Rl,
    Random,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = HeuristicKind::Vsids)]
    pub heuristic: HeuristicKind,
    /// Policy checkpoint, required by `--heuristic rl`.
    #[arg(long, required_if_eq("heuristic", "rl"))]
    pub policy: Option<PathBuf>,
    #[arg(long)]
    pub max_decisions: Option<u64>,
    #[arg(long)]
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RewardKind {
    Absolute,
    Delta,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Decision transitions to collect.
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 0.0002)]
    pub lr: f64,
    /// Checkpoint written at the end of training.
    #[arg(long)]
    pub out: PathBuf,
    /// Training log CSV; defaults to `<out>.log.csv`.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "256,256")]
    pub hidden: Vec<usize>,
    #[arg(long, default_value_t = 2048)]
    pub rollout_window: usize,
    #[arg(long, default_value_t = 500)]
    pub episode_cap: u64,
    #[arg(long, value_enum, default_value_t = RewardKind::Absolute)]
    pub reward: RewardKind,
    /// Also write `checkpoint-NNNNN.bin` next to `--out` every N windows.
    #[arg(long)]
    pub checkpoint_every: Option<usize>,
    /// Train only on the training part of an 80/20 split with this seed.
    #[arg(long)]
    pub split_seed: Option<u64>,
    /// Abort on the first unreadable instance.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subset {
    Train,
    Test,
    All,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub policy: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
    /// Which part of the 80/20 split to run on.
    #[arg(long, value_enum, default_value_t = Subset::Test)]
    pub subset: Subset,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
    /// Per-instance CSV. The summary goes to `<out>.summary.txt` and feature
    /// extraction times to `<out>.features.csv`.
    #[arg(long)]
    pub out: PathBuf,
    /// Instances solved concurrently; wall times are then less comparable.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 20)]
    pub vars: usize,
    #[arg(long, default_value_t = 91)]
    pub clauses: usize,
    /// File name prefix; defaults to `rand3sat-<vars>-<clauses>`.
    #[arg(long)]
    pub prefix: Option<String>,
}
