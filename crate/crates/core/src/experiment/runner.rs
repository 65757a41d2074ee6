use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};

use log::{info, warn};
use rayon::prelude::*;

use super::config::{ExperimentConfig, RunSpec};
use crate::metrics::{CsvRow, RunLabel};
use crate::network;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "JITS_SIM_THREADS";

/// Worker cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub label: RunLabel,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Raw rows in canonical order.
    pub rows: Vec<CsvRow>,
    pub failures: Vec<RunFailure>,
}

impl SweepResult {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Canonical row order: scenario, policy, routing, deadline, level, seed.
pub fn row_order(a: &CsvRow, b: &CsvRow) -> Ordering {
    (&a.scenario, &a.policy, &a.routing)
        .cmp(&(&b.scenario, &b.policy, &b.routing))
        .then(a.deadline_s.total_cmp(&b.deadline_s))
        .then(a.level.cmp(&b.level))
        .then(a.seed.cmp(&b.seed))
}

fn label(cfg: &ExperimentConfig, run: &RunSpec) -> RunLabel {
    let sim = cfg.sim_config(run);
    RunLabel {
        scenario: sim.scenario(),
        policy: run.series.policy.as_str().to_string(),
        routing: sim.routing_label().to_string(),
        deadline_s: run.deadline_s,
        seed: run.seed,
    }
}

fn run_one(cfg: &ExperimentConfig, run: &RunSpec) -> Result<Vec<CsvRow>, RunFailure> {
    let label = label(cfg, run);
    let sim = cfg.sim_config(run);
    let two_level = sim.traffic.pattern.is_two_level();
    match catch_unwind(AssertUnwindSafe(|| network::run(sim))) {
        Ok(Ok(out)) => Ok(CsvRow::for_run(&label, &out.metrics, two_level)),
        Ok(Err(e)) => Err(RunFailure {
            label,
            message: e.to_string(),
        }),
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "run panicked".to_string());
            Err(RunFailure { label, message })
        }
    }
}

/// Runs every cell of the sweep matrix, in parallel on at most `threads`
/// workers (all cores when `None`).
pub fn run_sweep(cfg: &ExperimentConfig, threads: Option<usize>) -> SweepResult {
    let runs = cfg.runs();
    info!("{}: {} runs", cfg.name(), runs.len());
    let work = || -> Vec<Result<Vec<CsvRow>, RunFailure>> { runs.par_iter().map(|r| run_one(cfg, r)).collect() };
    let results = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                warn!("cannot build a {n}-thread pool ({e}); using the global pool");
                work()
            }
        },
        None => work(),
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(v) => rows.extend(v),
            Err(f) => {
                warn!("run {:?} failed: {}", f.label, f.message);
                failures.push(f);
            }
        }
    }
    rows.sort_by(row_order);
    SweepResult { rows, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_sweep_is_sorted_and_complete() {
        let cfg = ExperimentConfig::from_toml(
            "policy = [\"vms_s\", \"jits_d\"]\nrouting = \"gf\"\ngeneration_s = 5\ndrain_s = 2\nseeds = [2, 1]\ndeadline_sweep = [0.5, 1.0, 0.5]",
        )
        .unwrap();
        let res = run_sweep(&cfg, Some(2));
        assert!(res.is_complete());
        assert_eq!(res.rows.len(), 8);
        let keys: Vec<(String, f64, u64)> = res.rows.iter().map(|r| (r.policy.clone(), r.deadline_s, r.seed)).collect();
        assert_eq!(keys[0], ("jits_d".to_string(), 0.5, 1));
        assert_eq!(keys[1], ("jits_d".to_string(), 0.5, 2));
        assert_eq!(keys[7], ("vms_s".to_string(), 1.0, 2));
    }

    #[test]
    fn invalid_run_is_reported_not_fatal() {
        let mut cfg = ExperimentConfig::from_toml("generation_s = 2\ndrain_s = 1\nseeds = [1]").unwrap();
        cfg.alpha = 3.0;
        let res = run_sweep(&cfg, Some(1));
        assert_eq!(res.failures.len(), 1);
        assert!(res.rows.is_empty());
    }
}
