//! Character-table cache: one JSON file per `(format-version, p, e, n, m,
//! ell, seed)`. Entries are re-validated on load (degree sum and a seeded
//! orthogonality row) and silently rebuilt when stale or corrupt; stores are
//! written to a temporary file and renamed into place.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dstar_core::chartab::{build_character_table, choose_verification_prime, CharacterTable};
use dstar_core::engine::{BuildOptions, EngineBase};
use dstar_core::field::FieldTower;
use dstar_core::group::{GroupOps, UnitGroup};
use dstar_core::rng::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::report::FORMAT_VERSION;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    p: u64,
    e: u32,
    n: u32,
    m: usize,
    ell: u64,
    seed: u64,
    class_sizes: Vec<u64>,
    class_inv: Vec<u32>,
    degrees: Vec<u64>,
    values: Vec<Vec<u64>>,
    labels: Vec<String>,
}

pub fn cache_path(dir: &Path, config: &RunConfig, ell: u64) -> PathBuf {
    dir.join(format!(
        "table-v{FORMAT_VERSION}-p{}-e{}-n{}-m{}-l{ell}-s{}.json",
        config.p, config.e, config.n, config.m, config.seed
    ))
}

/// Load the main character table from the cache or build and store it, then
/// assemble the engine base.
pub fn get_or_build(dir: &Path, config: &RunConfig, options: BuildOptions) -> Result<EngineBase> {
    let tower = FieldTower::build_with_bound(config.p, config.e, config.n, options.field_bound)
        .map_err(|e| anyhow::anyhow!("field construction failed: {e}"))?;
    let group = UnitGroup::build_with_bound(tower, config.m, options.group_bound)
        .map_err(|e| anyhow::anyhow!("group construction failed: {e}"))?;
    let ell = choose_verification_prime(group.exponent(), GroupOps::order(&group) as u64)
        .map_err(|e| anyhow::anyhow!("prime search failed: {e}"))?;
    let path = cache_path(dir, config, ell);

    let table = match load_validated(&path, config, &group, ell) {
        Some(table) => table,
        None => {
            let table = build_character_table(&group, group.classes(), ell, config.seed)
                .map_err(|e| anyhow::anyhow!("character table failed: {e}"))?;
            store(&path, config, &table)?;
            table
        }
    };
    EngineBase::from_parts(group, table, config.seed)
        .map_err(|e| anyhow::anyhow!("engine assembly failed: {e}"))
}

fn load_validated(
    path: &Path,
    config: &RunConfig,
    group: &UnitGroup,
    ell: u64,
) -> Option<CharacterTable> {
    let data = fs::read_to_string(path).ok()?;
    let file: CacheFile = match serde_json::from_str(&data) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("warning: cache entry {path:?} is corrupt ({e}); rebuilding");
            return None;
        }
    };
    if file.format_version != FORMAT_VERSION
        || (file.p, file.e, file.n, file.m) != (config.p, config.e, config.n, config.m)
        || file.ell != ell
        || file.seed != config.seed
    {
        return None;
    }
    let table = CharacterTable {
        ell: file.ell,
        seed: file.seed,
        class_sizes: file.class_sizes,
        class_inv: file.class_inv,
        degrees: file.degrees,
        values: file.values,
        labels: file.labels,
    };
    // revalidation: degree sum and one seeded orthogonality row
    let order = GroupOps::order(group) as u128;
    let sum_sq: u128 = table.degrees.iter().map(|&d| d as u128 * d as u128).sum();
    if sum_sq != order || table.num_classes() != group.classes().num_classes() {
        eprintln!("warning: cache entry {path:?} fails validation; rebuilding");
        return None;
    }
    let mut rng = SplitMix64::derive(config.seed, 0xCAC8E);
    let row = rng.below(table.num_irreps() as u64) as usize;
    for other in 0..table.num_irreps() {
        let expect = u64::from(other == row);
        if table.inner_product_full(row, other) != expect {
            eprintln!("warning: cache entry {path:?} fails orthogonality; rebuilding");
            return None;
        }
    }
    Some(table)
}

fn store(path: &Path, config: &RunConfig, table: &CharacterTable) -> Result<()> {
    let dir = path.parent().context("cache path has a parent")?;
    fs::create_dir_all(dir).with_context(|| format!("creating cache dir {dir:?}"))?;
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        p: config.p,
        e: config.e,
        n: config.n,
        m: config.m,
        ell: table.ell,
        seed: table.seed,
        class_sizes: table.class_sizes.clone(),
        class_inv: table.class_inv.clone(),
        degrees: table.degrees.clone(),
        values: table.values.clone(),
        labels: table.labels.clone(),
    };
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&file)?)
        .with_context(|| format!("writing cache file {tmp:?}"))?;
    fs::rename(&tmp, path).with_context(|| format!("installing cache file {path:?}"))?;
    Ok(())
}
