//! Run configuration shared by the CLI, the suites and the report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Cliff,
    Invariants,
    ConductorIntegrality,
    Ultrametric,
    Plancherel,
    Oracle,
    Norms,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Cliff,
        Suite::Invariants,
        Suite::ConductorIntegrality,
        Suite::Ultrametric,
        Suite::Plancherel,
        Suite::Oracle,
        Suite::Norms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cliff => "cliff",
            Suite::Invariants => "invariants",
            Suite::ConductorIntegrality => "conductor-integrality",
            Suite::Ultrametric => "ultrametric",
            Suite::Plancherel => "plancherel",
            Suite::Oracle => "oracle",
            Suite::Norms => "norms",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How triples are enumerated in the triangle-style checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum TriplePolicy {
    Exhaustive,
    Sampled { count: u64 },
}

impl FromStr for TriplePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(TriplePolicy::Exhaustive);
        }
        if let Some(count) = s.strip_prefix("sample:") {
            let count: u64 = count
                .parse()
                .map_err(|_| format!("bad sample count in '{s}'"))?;
            if count == 0 {
                return Err("sample count must be positive".into());
            }
            return Ok(TriplePolicy::Sampled { count });
        }
        Err(format!(
            "bad triple policy '{s}' (expected 'exhaustive' or 'sample:COUNT')"
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

/// Exhaustive triple scans are refused above this many triples; pass a
/// sampled policy instead.
pub const EXHAUSTIVE_TRIPLE_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub e: u32,
    pub n: u32,
    pub m: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub triples: TriplePolicy,
    /// Relative tolerance of the shell-sum oracle.
    pub tol: f64,
    /// Shell truncation of the oracle.
    pub shells: usize,
    pub max_group_order: u64,
    pub max_field_order: u64,
    #[serde(skip)]
    pub cache_dir: Option<std::path::PathBuf>,
    #[serde(skip)]
    pub threads: usize,
}

impl RunConfig {
    pub fn new(p: u64, e: u32, n: u32, m: usize) -> RunConfig {
        RunConfig {
            p,
            e,
            n,
            m,
            seed: 0,
            suites: Suite::ALL.to_vec(),
            triples: TriplePolicy::Exhaustive,
            tol: 1e-9,
            shells: 60,
            max_group_order: dstar_core::group::DEFAULT_GROUP_BOUND,
            max_field_order: dstar_core::field::DEFAULT_FIELD_BOUND,
            cache_dir: None,
            threads: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> RunConfig {
        self.seed = seed;
        self
    }

    pub fn with_suites(mut self, suites: Vec<Suite>) -> RunConfig {
        self.suites = suites;
        self
    }

    pub fn with_triples(mut self, triples: TriplePolicy) -> RunConfig {
        self.triples = triples;
        self
    }
}
