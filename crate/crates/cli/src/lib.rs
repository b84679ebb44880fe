//! Command-line front end for `hyperwalk`.
//!
//! Every subcommand reads a [`RunConfig`]: defaults, then an optional
//! `--config` file, then command-line flags. The merged configuration is
//! validated before any dataset is opened.

pub mod bench;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "hyperwalk", version, about = "Local random walk hyperlink prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print size statistics of each dataset after preprocessing.
    Stats(RunArgs),
    /// Run the evaluation protocol and write results.json and results.csv.
    Run(RunArgs),
    /// Run over a list of observed fractions and write sweep.csv.
    Sweep(RunArgs),
    /// Write the cross-validation curves of every trial to cv.csv.
    Cv(RunArgs),
    /// Time the walk-based scores on synthetic hypergraphs.
    Bench(BenchArgs),
}

/// Flags shared by the dataset subcommands. Lists are comma-separated.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hyperedge-list file(s).
    #[arg(long)]
    pub dataset: Option<String>,
    /// Methods: LRW, LRW-JS, LRW-GJS, HCN, HKatz, HPRA.
    #[arg(long)]
    pub methods: Option<String>,
    /// Fraction(s) of each true hyperedge kept in a fake.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Fakes sampled per missing hyperedge.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Fraction(s) of hyperedges observed.
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub k_grid: Option<String>,
    #[arg(long)]
    pub beta_grid: Option<String>,
    #[arg(long)]
    pub folds: Option<String>,
    /// Walk-row entries below this are dropped (default 1e-15).
    #[arg(long)]
    pub drop_tolerance: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads, or `auto`.
    #[arg(long)]
    pub threads: Option<String>,
    #[arg(long)]
    pub min_cardinality: Option<String>,
    /// `integer` or `label`.
    #[arg(long)]
    pub label_mode: Option<String>,
}

impl RunArgs {
    /// Merges defaults, the config file and the flags, then validates.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags: [(&str, &Option<String>); 15] = [
            ("dataset", &self.dataset),
            ("methods", &self.methods),
            ("alpha", &self.alpha),
            ("lambda", &self.lambda),
            ("rho", &self.rho),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("k-grid", &self.k_grid),
            ("beta-grid", &self.beta_grid),
            ("folds", &self.folds),
            ("drop-tolerance", &self.drop_tolerance),
            ("out", &self.out),
            ("threads", &self.threads),
            ("min-cardinality", &self.min_cardinality),
            ("label-mode", &self.label_mode),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Vertices per synthetic hypergraph.
    #[arg(long, default_value_t = 100_000)]
    pub vertices: usize,
    /// Hyperedge size of the synthetic hypergraphs.
    #[arg(long, default_value_t = 3)]
    pub cardinality: usize,
    /// Walk lengths to time.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub k: Vec<usize>,
    /// Clique-expansion degrees; defaults to 32,64,128 for K = 1, 8,16,32 for
    /// K = 2 and 4,8,16 above.
    #[arg(long, value_delimiter = ',')]
    pub degrees: Vec<f64>,
    #[arg(long, default_value_t = 20_000)]
    pub sources: usize,
    #[arg(long, default_value_t = 5_000)]
    pub candidates: usize,
    #[arg(long, default_value_t = 4)]
    pub candidate_size: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory for bench.csv.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Worker threads, or `auto`.
    #[arg(long)]
    pub threads: Option<String>,
}

impl BenchArgs {
    pub fn spec(&self) -> Result<bench::BenchSpec> {
        if self.k.is_empty() || self.k.contains(&0) {
            return Err(CliError::invalid("k", "needs walk lengths >= 1"));
        }
        if self.cardinality < 2 || self.candidate_size < 2 {
            return Err(CliError::invalid("cardinality", "hyperedges need at least two vertices"));
        }
        if self.degrees.iter().any(|&d| !d.is_finite() || d <= 0.0) {
            return Err(CliError::invalid("degrees", "must be positive"));
        }
        if self.vertices < self.candidate_size.max(self.cardinality) {
            return Err(CliError::invalid("vertices", "too few vertices"));
        }
        let grid = self
            .k
            .iter()
            .map(|&k| {
                let ds = if self.degrees.is_empty() {
                    bench::default_degrees(k)
                } else {
                    self.degrees.clone()
                };
                (k, ds)
            })
            .collect();
        Ok(bench::BenchSpec {
            vertices: self.vertices,
            cardinality: self.cardinality,
            grid,
            sources: self.sources,
            candidates: self.candidates,
            candidate_size: self.candidate_size,
            reps: self.reps,
            seed: self.seed,
        })
    }
}

fn parse_threads(value: Option<&str>) -> Result<Option<usize>> {
    let mut cfg = RunConfig::default();
    if let Some(v) = value {
        cfg.set("threads", v)?;
    }
    Ok(cfg.threads)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder.build()?.install(f)
}

/// Runs one parsed command and returns what it prints to standard output.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Bench(args) => {
            let spec = args.spec()?;
            let threads = parse_threads(args.threads.as_deref())?;
            let report = with_threads(threads, || bench::run(&spec))?;
            output::ensure_dir(&args.out)?;
            output::write_csv(&args.out.join("bench.csv"), &bench::BENCH_CSV_HEADER, &bench::csv_rows(&report))?;
            Ok(bench::render(&report))
        }
        Command::Stats(args) => {
            let cfg = args.resolve()?;
            commands::stats(&cfg)
        }
        Command::Run(args) | Command::Sweep(args) | Command::Cv(args) => {
            let cfg = args.resolve()?;
            with_threads(cfg.threads, || match &cli.command {
                Command::Run(_) => commands::run(&cfg),
                Command::Sweep(_) => commands::sweep(&cfg),
                _ => commands::cv(&cfg),
            })
        }
    }
}
