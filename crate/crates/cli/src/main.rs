//! `satrl`: English or expressions to CNF, CDCL solving with VSIDS or a learned
//! policy, PPO training, feature extraction and benchmarking.

mod args;
mod bench;
mod convert;
mod solve;
mod train;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// A failed command together with its exit code.
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, error: error.into() }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 2, error: e.into() }
    }
}

impl fmt::Debug for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CmdResult = Result<u8, Failure>;

/// `path` with `suffix` appended to its file name.
pub fn sibling_path(path: &std::path::Path, suffix: &str) -> std::path::PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(suffix);
    p.into()
}

fn print_version() {
    println!("satrl {}", env!("CARGO_PKG_VERSION"));
    println!("checkpoint-format {}", satrl_agent::CHECKPOINT_VERSION);
    println!("feature-schema {}", satrl_core::features::FEATURE_SCHEMA_VERSION);
    println!("bench-csv {}", satrl_bench::CSV_SCHEMA_VERSION);
}

fn features(file: Option<&std::path::Path>, schema: bool) -> CmdResult {
    use satrl_core::features::FEATURE_NAMES;
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if schema {
        writeln!(out, "# feature schema {}", satrl_core::features::FEATURE_SCHEMA_VERSION)?;
        for (i, name) in FEATURE_NAMES.iter().enumerate() {
            writeln!(out, "{i}\t{name}")?;
        }
        return Ok(0);
    }
    let Some(path) = file else {
        return Err(Failure::usage(anyhow::anyhow!("a CNF file is required unless --schema is given")));
    };
    let f = convert::read_cnf(path)?;
    let v = satrl_core::extract_features(&f)?;
    for (name, value) in FEATURE_NAMES.iter().zip(v.values()) {
        writeln!(out, "{name}={value}")?;
    }
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    if cli.version {
        print_version();
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(Failure::usage(anyhow::anyhow!("no subcommand given; see `satrl --help`")));
    };
    match command {
        Command::Convert(a) => convert::run(&a),
        Command::Solve(a) => solve::run(&a, cli.seed),
        Command::Train(a) => train::run(&a, cli.seed),
        Command::Features { file, schema } => features(file.as_deref(), schema),
        Command::Bench(a) => bench::run(&a, cli.seed),
        Command::Generate(a) => bench::generate(&a, cli.seed),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>()
        .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or(if cli.verbose { "info" } else { "warn" }),
    )
    .init();
    if cli.verbose {
        eprintln!("effective config: {cli:#?}");
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) if is_broken_pipe(&f.error) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f:?}");
            ExitCode::from(f.code)
        }
    }
}
