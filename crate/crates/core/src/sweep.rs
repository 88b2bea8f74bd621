//! Grid runs over random regular graphs, one record per (cell, seed).

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorize::TwoFactorization;
use crate::forest::{decompose, decompose_with_factorization, DecomposeOptions};
use crate::generators::{random_regular_with_girth, DEFAULT_RETRIES};
use crate::transversal::{DEFAULT_C_MAX, DEFAULT_STRICT_BUDGET};

pub const SWEEP_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("cell {index} has g_min {g_min} > n {n}")]
    GirthAboveOrder {
        index: usize,
        n: usize,
        g_min: usize,
    },
    #[error("seeds must be positive")]
    NoSeeds,
    #[error("building thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Either explicit `[n, k, g_min]` triples or a preset name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Cells(Vec<(usize, usize, usize)>),
    Preset(String),
}

fn default_seeds() -> u64 {
    5
}

fn default_strict_budget_ms() -> u64 {
    DEFAULT_STRICT_BUDGET.as_millis() as u64
}

fn default_exact_budget_ms() -> u64 {
    crate::forest::DEFAULT_EXACT_BUDGET.as_millis() as u64
}

fn default_c_max() -> usize {
    DEFAULT_C_MAX
}

fn default_retries() -> usize {
    DEFAULT_RETRIES
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub grid: Grid,
    #[serde(default = "default_seeds")]
    pub seeds: u64,
    /// Seeds run from `seed_base` to `seed_base + seeds - 1`.
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub strict: bool,
    #[serde(default = "default_strict_budget_ms")]
    pub strict_budget_ms: u64,
    #[serde(default = "default_exact_budget_ms")]
    pub exact_budget_ms: u64,
    #[serde(default = "default_c_max")]
    pub c_max: usize,
    /// Use the generator's Hamilton-cycle factorization instead of computing one.
    #[serde(default)]
    pub use_hint: bool,
    #[serde(default = "default_retries")]
    pub retries: usize,
}

impl SweepSpec {
    pub fn cells(&self) -> Result<Vec<(usize, usize, usize)>, SweepError> {
        let cells = match &self.grid {
            Grid::Cells(c) => c.clone(),
            Grid::Preset(name) => {
                preset(name).ok_or_else(|| SweepError::UnknownPreset(name.clone()))?
            }
        };
        for (index, &(n, _, g_min)) in cells.iter().enumerate() {
            if g_min > n {
                return Err(SweepError::GirthAboveOrder { index, n, g_min });
            }
        }
        Ok(cells)
    }

    fn options(&self) -> DecomposeOptions {
        DecomposeOptions {
            strict_only: self.strict,
            strict_budget: Duration::from_millis(self.strict_budget_ms),
            exact_budget: Duration::from_millis(self.exact_budget_ms),
            c_max: self.c_max,
        }
    }
}

/// Named grids. `"desk"` covers k = 1, 2, 3 with n <= 40.
pub fn preset(name: &str) -> Option<Vec<(usize, usize, usize)>> {
    match name {
        "desk" => Some(vec![
            (3, 1, 3),
            (5, 1, 5),
            (8, 1, 8),
            (13, 1, 13),
            (21, 1, 21),
            (40, 1, 40),
            (12, 2, 3),
            (20, 2, 4),
            (30, 2, 4),
            (40, 2, 4),
            (20, 3, 3),
            (40, 3, 3),
        ]),
        _ => None,
    }
}

/// One instance's outcome; fields the run never reached are `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub k: usize,
    pub g_min: usize,
    pub seed: u64,
    pub girth: Option<usize>,
    pub regime_tag: Option<String>,
    pub delta: Option<usize>,
    pub claimed_bound: Option<usize>,
    pub achieved_count: Option<usize>,
    pub verified: bool,
    /// `"ok"`, `"flagged:<codes>"` or `"error:<message>"`.
    pub status: String,
    /// Wall time, only when timing was requested (it would break byte-identical reruns).
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResults {
    pub version: u32,
    pub records: Vec<SweepRecord>,
}

impl SweepResults {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results serialize");
        s.push('\n');
        s
    }
}

fn run_one(
    spec: &SweepSpec,
    opts: &DecomposeOptions,
    (n, k, g_min): (usize, usize, usize),
    seed: u64,
    timing: bool,
) -> SweepRecord {
    let start = Instant::now();
    let mut rec = SweepRecord {
        n,
        k,
        g_min,
        seed,
        girth: None,
        regime_tag: None,
        delta: None,
        claimed_bound: None,
        achieved_count: None,
        verified: false,
        status: String::new(),
        runtime_ms: None,
    };
    let outcome = random_regular_with_girth(n, k, g_min, seed, spec.retries)
        .map_err(|e| e.to_string())
        .and_then(|(g, hint)| {
            rec.girth = g.girth().finite();

            if spec.use_hint {
                TwoFactorization::from_hint(&g, &hint)
                    .map_err(|e| e.to_string())
                    .and_then(|tf| {
                        decompose_with_factorization(&g, k, tf, opts).map_err(|e| e.to_string())
                    })
            } else {
                decompose(&g, k, opts).map_err(|e| e.to_string())
            }
        });
    match outcome {
        Ok(d) => {
            rec.regime_tag = Some(d.plan.tag.to_string());
            rec.delta = Some(d.plan.delta);
            rec.claimed_bound = Some(d.plan.claimed_bound());
            rec.achieved_count = Some(d.achieved_count());
            rec.verified = d.certificate.verified;
            rec.status = d.status();
        }
        Err(e) => rec.status = format!("error:{e}"),
    }
    if timing {
        rec.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

/// Runs every (cell, seed) pair on `jobs` threads; records come back in
/// (cell, seed) order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec, jobs: usize, timing: bool) -> Result<SweepResults, SweepError> {
    if spec.seeds == 0 {
        return Err(SweepError::NoSeeds);
    }
    let cells = spec.cells()?;
    let opts = spec.options();
    let work: Vec<((usize, usize, usize), u64)> = cells
        .iter()
        .flat_map(|&c| (0..spec.seeds).map(move |s| (c, spec.seed_base + s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let records = pool.install(|| {
        work.par_iter()
            .map(|&(cell, seed)| run_one(spec, &opts, cell, seed, timing))
            .collect()
    });
    Ok(SweepResults {
        version: SWEEP_VERSION,
        records,
    })
}
