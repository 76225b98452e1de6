//! Monte Carlo sweeps over the communication range.
//!
//! A plan fixes `(n, m, E_l)`, a base seed and a range grid. Scenario `i`
//! gets its own seed from the plan seed, so any per-run record can be
//! replayed on its own. Jobs run through [`ExecutionMode`]; aggregation
//! reduces over sorted values in grid order, so neither the worker count
//! nor the scenario order changes the output.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

use rand::RngCore;

use crate::connectivity::critical_radius;
use crate::engine::{self, SimConfig, SimResult, Strategy};
use crate::error::{Error, Result};
use crate::exec::ExecutionMode;
use crate::rng;
use crate::scenario::{generate_scenario, Scenario};
use crate::tours::f_mst_bound;

/// Quality ratios below `1 - Q_TOL` are reported as bound violations.
pub const Q_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeGrid {
    /// Ranges in meters.
    Absolute(Vec<f64>),
    /// Multiples of the critical radius for the plan's `m`, `epsilon` and `E_l`.
    FractionsOfCritical(Vec<f64>),
}

impl Default for RangeGrid {
    fn default() -> Self {
        RangeGrid::FractionsOfCritical((1..=8).map(|i| i as f64 / 8.0).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentPlan {
    pub n: usize,
    pub m: usize,
    pub edge_length: f64,
    pub scenario_count: usize,
    pub seed: u64,
    pub range_grid: RangeGrid,
    pub strategies: Vec<Strategy>,
    pub epsilon: f64,
    pub sim: SimConfig,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            n: 15,
            m: 4,
            edge_length: 1000.0,
            scenario_count: 100,
            seed: 0,
            range_grid: RangeGrid::default(),
            strategies: Strategy::ALL.to_vec(),
            epsilon: 5.0,
            sim: SimConfig::default(),
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(format!("plan: {m}")));
        if self.n == 0 || self.m == 0 {
            return bad("n and m must be positive".into());
        }
        if !(self.edge_length.is_finite() && self.edge_length > 0.0) {
            return bad("edge_length must be positive".into());
        }
        if self.scenario_count == 0 {
            return bad("scenario_count must be at least 1".into());
        }
        if self.strategies.is_empty() {
            return bad("at least one strategy is required".into());
        }
        let grid = match &self.range_grid {
            RangeGrid::Absolute(v) | RangeGrid::FractionsOfCritical(v) => v,
        };
        if grid.is_empty() {
            return bad("range grid is empty".into());
        }
        if grid.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return bad("range grid values must be finite and >= 0".into());
        }
        self.sim.validate()
    }

    pub fn critical_radius(&self) -> Result<f64> {
        critical_radius(self.m, self.epsilon, self.edge_length)
    }

    /// Grid resolved to meters.
    pub fn ranges(&self) -> Result<Vec<f64>> {
        match &self.range_grid {
            RangeGrid::Absolute(v) => Ok(v.clone()),
            RangeGrid::FractionsOfCritical(v) => {
                let rc = self.critical_radius()?;
                Ok(v.iter().map(|f| f * rc).collect())
            }
        }
    }

    pub fn scenario_seeds(&self) -> Vec<u64> {
        scenario_seeds(self.seed, self.scenario_count)
    }
}

pub fn scenario_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut r = rng::stream(seed, rng::STREAM_PLAN);
    (0..count).map(|_| r.next_u64()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_index: usize,
    pub scenario_seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "E_l")]
    pub edge_length: f64,
    pub r: f64,
    pub strategy: Strategy,
    pub f_seconds: f64,
    pub f_mst: f64,
    pub q: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub r: f64,
    pub strategy: Strategy,
    pub mean_q: f64,
    pub std_q: f64,
    pub mean_f: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub plan: ExperimentPlan,
    pub critical_radius: Option<f64>,
    pub ranges: Vec<f64>,
    pub rows: Vec<AggregateRow>,
    #[serde(skip)]
    pub runs: Vec<RunRecord>,
}

impl ExperimentOutput {
    pub fn row(&self, r_index: usize, strategy: Strategy) -> Option<&AggregateRow> {
        let r = *self.ranges.get(r_index)?;
        self.rows.iter().find(|row| row.r == r && row.strategy == strategy)
    }

    /// `results.csv` columns: scenario_seed, n, m, E_l, r, strategy, f_seconds, f_mst, q, wall_ms.
    pub fn write_results_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["scenario_seed", "n", "m", "E_l", "r", "strategy", "f_seconds", "f_mst", "q", "wall_ms"])
            .map_err(csv_err)?;
        for run in &self.runs {
            w.write_record([
                run.scenario_seed.to_string(),
                run.n.to_string(),
                run.m.to_string(),
                run.edge_length.to_string(),
                run.r.to_string(),
                run.strategy.to_string(),
                run.f_seconds.to_string(),
                run.f_mst.to_string(),
                run.q.to_string(),
                format!("{:.3}", run.wall_ms),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `summary.json`: the plan echo plus aggregate rows.
    pub fn write_summary_json(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `f / f_MST`.
pub fn quality(result: &SimResult, scn: &Scenario) -> Result<f64> {
    let bound = f_mst_bound(scn);
    if bound <= 0.0 {
        return Err(Error::DegenerateBound);
    }
    Ok(result.total_f / bound)
}

/// Runs one scenario at one range with one strategy and scores it.
pub fn run_one(
    plan_n: usize,
    plan_m: usize,
    edge_length: f64,
    scenario_seed: u64,
    r: f64,
    strategy: Strategy,
    sim: &SimConfig,
) -> Result<(SimResult, f64, f64)> {
    let scn = generate_scenario(plan_n, plan_m, edge_length, r, scenario_seed)?;
    let result = engine::run(&scn, &sim.with_strategy(strategy))?;
    let f_mst = f_mst_bound(&scn);
    let q = quality(&result, &scn)?;
    if q < 1.0 - Q_TOL {
        return Err(Error::InvariantViolation {
            time: result.end_time,
            message: format!("quality {q} below 1: f = {} < f_MST = {f_mst}", result.total_f),
        });
    }
    Ok((result, f_mst, q))
}

pub fn run_experiment(plan: &ExperimentPlan, mode: ExecutionMode) -> Result<ExperimentOutput> {
    plan.validate()?;
    let ranges = plan.ranges()?;
    let seeds = plan.scenario_seeds();
    let jobs: Vec<(usize, u64, f64, Strategy)> = seeds
        .iter()
        .enumerate()
        .flat_map(|(i, &seed)| {
            ranges
                .iter()
                .flat_map(move |&r| plan.strategies.iter().map(move |&s| (i, seed, r, s)))
        })
        .collect();
    let outcomes = mode.map(jobs, |(i, seed, r, strategy)| {
        let started = Instant::now();
        run_one(plan.n, plan.m, plan.edge_length, seed, r, strategy, &plan.sim)
            .map(|(res, f_mst, q)| RunRecord {
                scenario_index: i,
                scenario_seed: seed,
                n: plan.n,
                m: plan.m,
                edge_length: plan.edge_length,
                r,
                strategy,
                f_seconds: res.total_f,
                f_mst,
                q,
                wall_ms: started.elapsed().as_secs_f64() * 1e3,
            })
            .map_err(|e| Error::RunFailed {
                seed,
                range: r,
                strategy: strategy.to_string(),
                source: Box::new(e),
            })
    });
    let runs = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = aggregate(&runs, &ranges, &plan.strategies);
    Ok(ExperimentOutput {
        plan: plan.clone(),
        critical_radius: plan.critical_radius().ok(),
        ranges,
        rows,
        runs,
    })
}

/// Mean and sample standard deviation of `q` and mean `f` per `(r, strategy)`.
/// Values are sorted before summation, making the result independent of run order.
pub fn aggregate(runs: &[RunRecord], ranges: &[f64], strategies: &[Strategy]) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for &r in ranges {
        for &strategy in strategies {
            let picked: Vec<&RunRecord> = runs.iter().filter(|x| x.r == r && x.strategy == strategy).collect();
            if picked.is_empty() {
                continue;
            }
            let qs = sorted(picked.iter().map(|x| x.q));
            let fs = sorted(picked.iter().map(|x| x.f_seconds));
            let (mean_q, std_q) = mean_std(&qs);
            rows.push(AggregateRow {
                r,
                strategy,
                mean_q,
                std_q,
                mean_f: mean_std(&fs).0,
                runs: picked.len(),
            });
        }
    }
    rows
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    dev.sort_by(f64::total_cmp);
    (mean, (dev.iter().sum::<f64>() / (n - 1.0)).sqrt())
}

/// A scenario where STSTC does strictly worse with the longer range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub scenario_index: usize,
    pub scenario_seed: u64,
    pub r_low: f64,
    pub r_high: f64,
    pub f_low: f64,
    pub f_high: f64,
    pub low: SimResult,
    pub high: SimResult,
}

/// Searches seeded scenarios, in index order, for one where STSTC's total
/// time at `r_high` exceeds that at `r_low` by more than `1e-6`.
#[allow(clippy::too_many_arguments)]
pub fn find_nonmonotone_witness(
    n: usize,
    m: usize,
    edge_length: f64,
    r_pairs: &[(f64, f64)],
    max_scenarios: usize,
    seed: u64,
    sim: &SimConfig,
    mode: ExecutionMode,
) -> Result<Option<Witness>> {
    let pairs: Vec<(f64, f64)> = r_pairs.iter().copied().filter(|(lo, hi)| lo < hi).collect();
    if pairs.is_empty() || max_scenarios == 0 {
        return Ok(None);
    }
    let cfg = sim.with_strategy(Strategy::Ststc);
    let jobs: Vec<(usize, u64)> = scenario_seeds(seed, max_scenarios).into_iter().enumerate().collect();
    let found = mode.find_map_first(jobs, |(i, scenario_seed)| {
        let attempt = || -> Result<Option<Witness>> {
            let base = generate_scenario(n, m, edge_length, 0.0, scenario_seed)?;
            for &(r_low, r_high) in &pairs {
                let low = engine::run(&base.with_range(r_low), &cfg)?;
                let high = engine::run(&base.with_range(r_high), &cfg)?;
                if high.total_f > low.total_f + 1e-6 {
                    return Ok(Some(Witness {
                        scenario_index: i,
                        scenario_seed,
                        r_low,
                        r_high,
                        f_low: low.total_f,
                        f_high: high.total_f,
                        low,
                        high,
                    }));
                }
            }
            Ok(None)
        };
        attempt().transpose()
    });
    found.transpose()
}
