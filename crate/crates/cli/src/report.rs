//! Machine-readable reports. Rationals are emitted as `{num, den}` decimal
//! strings and rational functions as exponent-to-rational coefficient maps;
//! every collection is emitted in a canonical order so that identical runs
//! produce byte-identical documents. Timing is deliberately not part of the
//! document (it goes to stderr) to keep reports reproducible.

use std::collections::BTreeMap;

use dstar_core::engine::Engine;
use dstar_core::group::GroupOps;
use dstar_core::num_rational::BigRational;
use dstar_core::plancherel::{mu_inverse_distinct, mu_inverse_equal, RationalFn};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::suites::SuiteOutcome;

pub const FORMAT_VERSION: u32 = 1;

/// Number of columns of the CSV schema.
pub const CSV_COLUMNS: usize = 10;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalFnJson {
    pub num: BTreeMap<String, RationalJson>,
    pub den: BTreeMap<String, RationalJson>,
}

impl From<&RationalFn> for RationalFnJson {
    fn from(f: &RationalFn) -> Self {
        let (num, den) = f.canonical_pair();
        let to_map = |v: Vec<(i64, BigRational)>| {
            v.into_iter()
                .map(|(e, c)| (e.to_string(), RationalJson::from(&c)))
                .collect()
        };
        RationalFnJson {
            num: to_map(num),
            den: to_map(den),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: u64,
    pub exponent: u64,
    pub ell: u64,
    pub num_classes: usize,
    pub num_irreps: usize,
    /// degree -> number of irreducibles of that degree
    pub degree_profile: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrepJson {
    pub label: String,
    pub degree: u64,
    pub t: u64,
    pub r: u64,
    pub level: usize,
    pub inv_self: RationalJson,
    pub f_self: i64,
    pub f_tilde_self: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairJson {
    pub label1: String,
    pub label2: String,
    pub d1: u64,
    pub d2: u64,
    pub dist: usize,
    pub hom_dims: Vec<u64>,
    pub inv: RationalJson,
    pub t_pair: u64,
    pub f: i64,
    pub f_tilde: i64,
    /// Whether the density function was reduced to the diagonal of the first
    /// member (distance-zero pairs).
    pub dist_zero_reduced: bool,
    pub mu_inv: RationalFnJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub config: RunConfig,
    pub group: GroupSummary,
    pub irreps: Vec<IrrepJson>,
    pub pairs: Vec<PairJson>,
    pub suites: Vec<SuiteOutcome>,
}

fn group_summary(engine: &Engine) -> GroupSummary {
    let base = &engine.base;
    let mut degree_profile: BTreeMap<String, usize> = BTreeMap::new();
    for &d in &base.table.degrees {
        *degree_profile.entry(format!("{d}")).or_default() += 1;
    }
    GroupSummary {
        order: GroupOps::order(&base.group) as u64,
        exponent: base.group.exponent(),
        ell: base.table.ell,
        num_classes: base.table.num_classes(),
        num_irreps: base.table.num_irreps(),
        degree_profile,
    }
}

pub fn build_report(engine: &Engine, config: &RunConfig, suites: Vec<SuiteOutcome>) -> Report {
    let base = &engine.base;
    let irreps = base
        .irreps
        .iter()
        .map(|rec| IrrepJson {
            label: base.table.labels[rec.idx].clone(),
            degree: rec.degree,
            t: rec.t,
            r: rec.r,
            level: rec.level,
            inv_self: RationalJson::from(&rec.inv_self),
            f_self: rec.f_self,
            f_tilde_self: rec.f_tilde_self,
        })
        .collect();
    let pairs = engine
        .pairs
        .iter()
        .map(|pair| {
            let (d1, d2) = (base.table.degrees[pair.i1], base.table.degrees[pair.i2]);
            let mu = if pair.dist == 0 {
                let rec = &base.irreps[pair.i1];
                mu_inverse_equal(&rec.inv_self, rec.t, rec.degree)
            } else {
                mu_inverse_distinct(&pair.inv, d1, d2)
            };
            PairJson {
                label1: base.table.labels[pair.i1].clone(),
                label2: base.table.labels[pair.i2].clone(),
                d1,
                d2,
                dist: pair.dist,
                hom_dims: pair.hom_dims.clone(),
                inv: RationalJson::from(&pair.inv),
                t_pair: pair.t_pair,
                f: pair.f,
                f_tilde: pair.f_tilde,
                dist_zero_reduced: pair.dist == 0,
                mu_inv: RationalFnJson::from(&mu),
            }
        })
        .collect();
    Report {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        group: group_summary(engine),
        irreps,
        pairs,
        suites,
    }
}

/// Report with the group summary only (empty suite selection).
pub fn build_report_summary_only(engine: &Engine, config: &RunConfig) -> Report {
    Report {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        group: group_summary(engine),
        irreps: Vec::new(),
        pairs: Vec::new(),
        suites: Vec::new(),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per pair:
    /// `label1,label2,d1,d2,dist,inv_num,inv_den,t_pair,f,f_tilde`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label1,label2,d1,d2,dist,inv_num,inv_den,t_pair,f,f_tilde\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                p.label1,
                p.label2,
                p.d1,
                p.d2,
                p.dist,
                p.inv.num,
                p.inv.den,
                p.t_pair,
                p.f,
                p.f_tilde
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Suite;

    fn small_report() -> Report {
        let config = RunConfig::new(2, 1, 2, 1).with_suites(vec![Suite::Norms]);
        crate::run_suite(&config).unwrap()
    }

    #[test]
    fn json_is_deterministic() {
        let a = small_report().to_json();
        let b = small_report().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_schema() {
        let report = small_report();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), CSV_COLUMNS);
        // 3 irreps -> 6 unordered pairs
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 6);
        for row in rows {
            assert_eq!(row.split(',').count(), CSV_COLUMNS);
        }
    }

    #[test]
    fn sym3_csv_row_values() {
        let report = small_report();
        let csv = report.to_csv();
        // the (trivial, rho) and (sign, rho) rows: dist = 1, inv = 8/9, f = 4
        let mixed: Vec<&str> = csv
            .lines()
            .filter(|l| l.contains(",1,2,1,8,9,0,4,4") || l.ends_with(",1,2,1,8,9,0,4,4"))
            .collect();
        assert_eq!(mixed.len(), 2);
    }
}
