//! `dstar` — exact invariants of division-algebra representations on finite
//! quotients, with batch verification suites and reproducible reports.
//!
//! ```bash
//! # build the group/table pipeline and emit the invariant report
//! dstar compute --p 2 --e 1 --n 2 --m 2 --out report.json
//!
//! # run all verification suites; exit 0 iff every check passes
//! dstar verify --p 2 --e 1 --n 2 --m 2
//!
//! # selected suites, sampled triples, CSV output
//! dstar verify --p 2 --e 1 --n 3 --m 2 --suites ultrametric,cliff \
//!     --triples sample:10000 --seed 7 --format csv --out pairs.csv
//! ```
//!
//! Exit codes: 0 all requested checks passed, 1 violations found,
//! 2 execution error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dstar_cli::config::{OutputFormat, RunConfig, Suite, TriplePolicy};
use dstar_cli::{describe_engine, suites, violation_count};

#[derive(Parser)]
#[command(
    name = "dstar",
    about = "Exact invariants of division-algebra representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args)]
struct CommonArgs {
    /// Residue characteristic (prime)
    #[arg(long)]
    p: u64,

    /// Extension exponent: q = p^e
    #[arg(long, default_value_t = 1)]
    e: u32,

    /// Degree of the division algebra
    #[arg(long)]
    n: u32,

    /// Truncation level of the principal congruence filtration
    #[arg(long)]
    m: usize,

    /// Seed for all randomized searches and sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, default_value = "json")]
    format: OutputFormat,

    /// Character-table cache directory (or DSTAR_CACHE_DIR)
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Relative tolerance of the shell-sum oracle
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Shell truncation of the oracle
    #[arg(long, default_value_t = 60)]
    shells: usize,

    /// Refuse groups larger than this
    #[arg(long, default_value_t = dstar_core::group::DEFAULT_GROUP_BOUND)]
    max_group_order: u64,

    /// Worker threads for pair/triple computations
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
}

#[derive(Subcommand)]
enum Commands {
    /// Build the tower/group/table pipeline and report all invariants
    Compute {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run verification suites over the computed invariants
    Verify {
        #[command(flatten)]
        common: CommonArgs,

        /// Comma-separated subset of
        /// cliff,invariants,conductor-integrality,ultrametric,plancherel,oracle,norms
        /// (all when omitted; 'none' for a group summary only)
        #[arg(long)]
        suites: Option<String>,

        /// Triple enumeration: 'exhaustive' or 'sample:COUNT'
        #[arg(long, default_value = "exhaustive")]
        triples: TriplePolicy,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn make_config(common: &CommonArgs, suites: Vec<Suite>, triples: TriplePolicy) -> RunConfig {
    let mut config = RunConfig::new(common.p, common.e, common.n, common.m)
        .with_seed(common.seed)
        .with_suites(suites)
        .with_triples(triples);
    config.tol = common.tol;
    config.shells = common.shells;
    config.max_group_order = common.max_group_order;
    config.threads = common.threads;
    config.cache_dir = common
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("DSTAR_CACHE_DIR").map(PathBuf::from));
    config
}

fn parse_suites(arg: Option<&str>) -> Result<Vec<Suite>, String> {
    match arg {
        None => Ok(Suite::ALL.to_vec()),
        Some("none") | Some("") => Ok(Vec::new()),
        Some(list) => list.split(',').map(|s| s.trim().parse()).collect(),
    }
}

fn emit(report: &dstar_cli::Report, common: &CommonArgs) -> anyhow::Result<()> {
    let body = match common.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    };
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run() -> anyhow::Result<u8> {
    let cli = Cli::parse();
    let start = Instant::now();
    match cli.command {
        Commands::Compute { common } => {
            let config = make_config(&common, Vec::new(), TriplePolicy::Exhaustive);
            let engine = dstar_cli::build_engine(&config)?;
            let report = dstar_cli::report::build_report(&engine, &config, Vec::new());
            emit(&report, &common)?;
            eprintln!(
                "computed {} in {:.2?}",
                describe_engine(&engine),
                start.elapsed()
            );
            Ok(0)
        }
        Commands::Verify {
            common,
            suites: suite_arg,
            triples,
        } => {
            let selected = parse_suites(suite_arg.as_deref()).map_err(anyhow::Error::msg)?;
            let config = make_config(&common, selected, triples);
            let engine = dstar_cli::build_engine(&config)?;
            suites::validate_policy(&engine, &config)?;
            let report = if config.suites.is_empty() {
                dstar_cli::report::build_report_summary_only(&engine, &config)
            } else {
                let outcomes = suites::run_suites(&engine, &config);
                dstar_cli::report::build_report(&engine, &config, outcomes)
            };
            emit(&report, &common)?;
            let violations = violation_count(&report);
            for suite in &report.suites {
                eprintln!(
                    "suite {:<22} {:>8} checks, {} violations",
                    suite.name,
                    suite.checked,
                    suite.violations.len()
                );
            }
            eprintln!(
                "verified {} in {:.2?}",
                describe_engine(&engine),
                start.elapsed()
            );
            Ok(if violations == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
