//! Command-line front end: analyze recordings, scan sliding windows,
//! simulate benchmark systems, and run Monte Carlo comparisons.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cgci::benchmark::{run_benchmark, BenchmarkConfig};
use cgci::causality::{causality_matrix, TestMode};
use cgci::io::{format_analysis, format_benchmark, format_window, read_config, read_table};
use cgci::selection::{Method, SelectionConfig};
use cgci::simulate::System;
use cgci::window::window_scan;
use cgci::Error;

/// Direct Granger causality for multivariate time series via restricted
/// vector autoregressive models.
#[derive(Parser)]
#[command(name = "cgci", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the causality network of one recording
    Analyze(AnalyzeArgs),
    /// Sliding-window connectivity scan of one recording
    Window(WindowArgs),
    /// Write one realization of a benchmark system as a table
    Simulate(SimulateArgs),
    /// Monte Carlo comparison of selection methods on a system
    Benchmark(BenchmarkArgs),
}

fn parse_method(s: &str) -> Result<Method, Error> {
    Method::from_str(s)
}

#[derive(Args)]
struct ModelArgs {
    /// Selection strategy: bts, tdlag, tdvar, bulag, buvar, lasso, full
    #[arg(long, default_value = "bts", value_parser = parse_method)]
    method: Method,
    /// Maximum lag of the dynamic regression
    #[arg(long, default_value_t = 5)]
    pmax: usize,
    /// Follow the lasso modification (drop step) on the LARS path
    #[arg(long)]
    lasso_drop: bool,
}

impl ModelArgs {
    fn selection(&self, method: Method) -> SelectionConfig {
        let mut cfg = SelectionConfig::new(method, self.pmax);
        cfg.lasso_drop = self.lasso_drop;
        cfg
    }
}

#[derive(Args)]
struct TestArgs {
    /// Significance level for the F tests
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Compare raw p-values with alpha instead of applying FDR correction
    #[arg(long)]
    no_fdr: bool,
    /// Mark an edge whenever the index is positive, skipping the tests
    #[arg(long, conflicts_with = "no_fdr")]
    no_test: bool,
}

impl TestArgs {
    fn mode(&self) -> TestMode {
        if self.no_test {
            TestMode::NoTest
        } else if self.no_fdr {
            TestMode::Raw
        } else {
            TestMode::Fdr
        }
    }
}

#[derive(Args)]
struct SystemArgs {
    /// Built-in system (henon uses K=5, C=0.3; s3 support seed 1)
    #[arg(long, value_enum, default_value_t = SystemName::S1, conflicts_with = "config")]
    system: SystemName,
    /// System definition file overriding --system
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemName {
    S1,
    S2,
    S3,
    Henon,
}

impl SystemArgs {
    fn resolve(&self) -> Result<System, Error> {
        if let Some(path) = &self.config {
            return read_config(path)?.build_system();
        }
        Ok(match self.system {
            SystemName::S1 => System::S1,
            SystemName::S2 => System::S2,
            SystemName::S3 => System::S3 { seed: 1 },
            SystemName::Henon => System::Henon { k: 5, c: 0.3 },
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Delimited table: header of channel names, one row per time point
    input: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    test: TestArgs,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArgs {
    input: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    test: TestArgs,
    /// Window length in samples
    #[arg(long)]
    window: usize,
    /// Window advance in samples
    #[arg(long, default_value_t = 1)]
    step: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Series length
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Realization seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Comma-separated methods; the first is the comparison baseline
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bts",
        value_parser = parse_method
    )]
    method: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pmax: usize,
    #[arg(long)]
    lasso_drop: bool,
    #[command(flatten)]
    test: TestArgs,
    /// Series length per realization
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Monte Carlo realizations
    #[arg(long, default_value_t = 100)]
    realizations: usize,
    /// Base seed; realization r uses seed + r
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasible() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze(args) => {
            let ts = read_table(&args.input)?;
            let cfg = args.model.selection(args.model.method);
            let matrix = causality_matrix(&ts, &cfg, args.test.alpha, args.test.mode())?;
            emit(&format_analysis(&matrix, &cfg, ts.names()), args.output.as_deref())
        }
        Command::Window(args) => {
            let ts = read_table(&args.input)?;
            let cfg = args.model.selection(args.model.method);
            let scan = window_scan(
                &ts,
                &cfg,
                args.test.alpha,
                args.test.mode(),
                args.window,
                args.step,
            )?;
            emit(&format_window(&scan, ts.names()), args.output.as_deref())
        }
        Command::Simulate(args) => {
            let system = args.system.resolve()?.build()?;
            let ts = system.generate(args.n, args.seed)?;
            let mut text = format!("# system: {}\n# seed: {}\n", system.name(), args.seed);
            for (i, j) in system.truth().edges() {
                text.push_str(&format!("# true edge: {} -> {}\n", ts.names()[i], ts.names()[j]));
            }
            text.push_str(&cgci::io::format_table(&ts));
            emit(&text, args.output.as_deref())
        }
        Command::Benchmark(args) => {
            let system = args.system.resolve()?.build()?;
            let mut config = BenchmarkConfig::new(
                args.method.clone(),
                args.n,
                args.pmax,
                args.realizations,
            );
            config.alpha = args.test.alpha;
            config.mode = args.test.mode();
            config.seed = args.seed;
            config.lasso_drop = args.lasso_drop;
            let result = run_benchmark(&system, &config)?;
            emit(&format_benchmark(&result), args.output.as_deref())
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
