//! Orchestration around `dstar-core`: run configuration, verification
//! suites, character-table caching, machine-readable reports and a small
//! worker pool. The `dstar` binary is a thin wrapper over this crate.

pub mod cache;
pub mod config;
pub mod pool;
pub mod report;
pub mod suites;

pub use config::{OutputFormat, RunConfig, Suite, TriplePolicy};
pub use report::Report;

use anyhow::Result;
use dstar_core::engine::{BuildOptions, Engine, EngineBase};
use dstar_core::group::GroupOps;

/// Build the engine for a config, going through the table cache when one is
/// configured. Pair records are computed on the worker pool.
pub fn build_engine(config: &RunConfig) -> Result<Engine> {
    let options = BuildOptions {
        field_bound: config.max_field_order,
        group_bound: config.max_group_order,
    };
    let base = match &config.cache_dir {
        Some(dir) => cache::get_or_build(dir, config, options)?,
        None => EngineBase::build(config.p, config.e, config.n, config.m, config.seed, options)
            .map_err(|e| anyhow::anyhow!("engine build failed: {e}"))?,
    };
    let pair_list = base.pair_list();
    let pairs = pool::parallel_map(&pair_list, config.threads, |&(i1, i2)| {
        base.compute_pair(i1, i2)
    });
    let pairs = pairs
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| anyhow::anyhow!("pair computation failed: {e}"))?;
    Ok(Engine { base, pairs })
}

/// Run the configured suites and assemble the report.
pub fn run_suite(config: &RunConfig) -> Result<Report> {
    let engine = build_engine(config)?;
    suites::validate_policy(&engine, config)?;
    let outcomes = suites::run_suites(&engine, config);
    Ok(report::build_report(&engine, config, outcomes))
}

/// Group-summary-only report for an empty suite selection.
pub fn summary_only(config: &RunConfig) -> Result<Report> {
    let engine = build_engine(config)?;
    Ok(report::build_report_summary_only(&engine, config))
}

/// Total violations across all suites of a report.
pub fn violation_count(report: &Report) -> usize {
    report.suites.iter().map(|s| s.violations.len()).sum()
}

/// Sanity data echoed on stderr after a run.
pub fn describe_engine(engine: &Engine) -> String {
    format!(
        "|G| = {}, exponent = {}, ell = {}, {} classes, {} irreps, {} pairs",
        GroupOps::order(&engine.base.group),
        engine.base.group.exponent(),
        engine.base.table.ell,
        engine.base.table.num_classes(),
        engine.base.num_irreps(),
        engine.pairs.len()
    )
}
