//! Sweep execution: common-random-number realizations, per-scheme dispatch,
//! and order-independent aggregation.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{fixed_antenna_solution, noma_exhaustive_solution, tdma_exhaustive};
use crate::geometry::Deployment;
use crate::qos::{solve_no_qos, solve_with_qos, Solution};
use crate::seed;

use super::config::{dbm_to_watts, OutagePolicy, ScenarioConfig, Scheme};
use super::HarnessError;

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    PMaxDbm,
    RMin,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::PMaxDbm => "p_max_dbm",
            SweepAxis::RMin => "r_min",
        }
    }

    /// File-name stem for persisted results.
    pub fn stem(&self) -> &'static str {
        match self {
            SweepAxis::PMaxDbm => "pmax",
            SweepAxis::RMin => "rmin",
        }
    }
}

/// One scheme run on one realization at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub scheme: Scheme,
    pub realization: usize,
    pub seed: u64,
    pub p_max_dbm: f64,
    pub r_min: f64,
    pub sum_rate: f64,
    pub feasible: bool,
    pub outer_iterations: usize,
    pub x_pin: f64,
}

/// Aggregates of one scheme at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemePoint {
    pub scheme: Scheme,
    /// Mean sum rate over the included realizations (see outage policy);
    /// zero when every realization was an outage.
    pub mean_sum_rate: f64,
    pub outages: usize,
    pub mean_outer_iterations: f64,
    /// Wall time for this scheme at this sweep point; not persisted, so
    /// output files stay byte-identical across runs.
    pub wall_time: Duration,
}

/// One swept value with all scheme aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub per_scheme: Vec<SchemePoint>,
}

/// Full sweep output: aggregates, raw per-realization records, and the exact
/// config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub raw: Vec<RealizationRecord>,
    pub config: ScenarioConfig,
}

impl SweepResult {
    /// Aggregates of one scheme along the sweep, in point order.
    pub fn curve(&self, scheme: Scheme) -> Vec<&SchemePoint> {
        self.points
            .iter()
            .flat_map(|point| {
                point
                    .per_scheme
                    .iter()
                    .filter(move |sp| sp.scheme == scheme)
            })
            .collect()
    }
}

/// Runs one scheme on one deployment. Deterministic given
/// `(realization_seed, scheme)`: the inner solver seed is derived from both.
pub fn run_realization(
    dep: &Deployment,
    config: &ScenarioConfig,
    scheme: Scheme,
    realization_seed: u64,
) -> Solution {
    let params = config
        .system_params()
        .expect("config validated before running realizations");
    let pso = config
        .pso
        .with_seed(seed::derive(realization_seed, 1 + scheme as u64));
    match scheme {
        Scheme::NomaPso => {
            if dep.has_rate_floors() {
                solve_with_qos(dep, &params, &pso)
            } else {
                solve_no_qos(dep, &params, &pso)
            }
        }
        Scheme::NomaExhaustive => noma_exhaustive_solution(dep, &params, config.grid_step_m),
        Scheme::NomaFixed => fixed_antenna_solution(dep, &params, dep.has_rate_floors()),
        Scheme::TdmaExhaustive => tdma_exhaustive(dep, &params, config.grid_step_m),
    }
}

/// Sweeps the per-user power budget at the fixed rate floor.
pub fn sweep_pmax(config: &ScenarioConfig) -> Result<SweepResult, HarnessError> {
    run_sweep(config, SweepAxis::PMaxDbm)
}

/// Sweeps the common rate floor at the fixed power budget.
pub fn sweep_rmin(config: &ScenarioConfig) -> Result<SweepResult, HarnessError> {
    run_sweep(config, SweepAxis::RMin)
}

fn run_sweep(config: &ScenarioConfig, axis: SweepAxis) -> Result<SweepResult, HarnessError> {
    config.validate()?;
    let params = config.system_params()?;
    let values: &[f64] = match axis {
        SweepAxis::PMaxDbm => &config.p_max_dbm,
        SweepAxis::RMin => &config.r_min,
    };
    let mut points = Vec::with_capacity(values.len());
    let mut raw = Vec::new();
    for &value in values {
        let (p_max_dbm, r_min) = match axis {
            SweepAxis::PMaxDbm => (value, config.fixed_r_min),
            SweepAxis::RMin => (config.fixed_p_max_dbm, value),
        };
        let p_max_w = dbm_to_watts(p_max_dbm);
        let mut per_scheme = Vec::with_capacity(config.schemes.len());
        for &scheme in &config.schemes {
            let started = Instant::now();
            // Realization k sees the same deployment for every scheme and
            // every sweep value: positions depend only on the derived seed.
            let records: Vec<RealizationRecord> = (0..config.realizations)
                .into_par_iter()
                .map(|k| {
                    let realization_seed = seed::derive(config.seed, k as u64);
                    let dep =
                        Deployment::sample(realization_seed, config.users, &params, p_max_w, r_min);
                    let solution = run_realization(&dep, config, scheme, realization_seed);
                    RealizationRecord {
                        scheme,
                        realization: k,
                        seed: realization_seed,
                        p_max_dbm,
                        r_min,
                        sum_rate: solution.sum_rate,
                        feasible: solution.feasible,
                        outer_iterations: solution.outer_iterations,
                        x_pin: solution.x_pin,
                    }
                })
                .collect();
            per_scheme.push(aggregate(
                scheme,
                &records,
                config.outage_policy,
                started.elapsed(),
            ));
            raw.extend(records);
        }
        points.push(SweepPoint { value, per_scheme });
    }
    Ok(SweepResult {
        axis,
        points,
        raw,
        config: config.clone(),
    })
}

/// Reduces records in realization order so the result is independent of how
/// the parallel runs interleaved.
pub fn aggregate(
    scheme: Scheme,
    records: &[RealizationRecord],
    policy: OutagePolicy,
    wall_time: Duration,
) -> SchemePoint {
    let outages = records.iter().filter(|r| !r.feasible).count();
    let mut rate_sum = 0.0;
    let mut outer_sum = 0.0;
    let mut included = 0usize;
    for record in records {
        match policy {
            OutagePolicy::Exclude => {
                if record.feasible {
                    rate_sum += record.sum_rate;
                    outer_sum += record.outer_iterations as f64;
                    included += 1;
                }
            }
            OutagePolicy::CountZero => {
                rate_sum += if record.feasible {
                    record.sum_rate
                } else {
                    0.0
                };
                outer_sum += record.outer_iterations as f64;
                included += 1;
            }
        }
    }
    let (mean_sum_rate, mean_outer_iterations) = if included == 0 {
        (0.0, 0.0)
    } else {
        (rate_sum / included as f64, outer_sum / included as f64)
    };
    SchemePoint {
        scheme,
        mean_sum_rate,
        outages,
        mean_outer_iterations,
        wall_time,
    }
}
