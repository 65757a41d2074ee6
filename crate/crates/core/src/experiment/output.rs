use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::runner::SweepResult;
use crate::metrics::{CsvRow, CSV_HEADER};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("aggregate {0} not found")]
    MissingAggregate(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> OutputError + '_ {
    move |source| OutputError::Csv {
        path: path.display().to_string(),
        source,
    }
}

pub const AGGREGATE_HEADER: &str =
    "scenario,policy,routing,deadline_s,level,runs,generated,miss_ratio,drop_ratio,avg_delay_ms,max_delay_ms,avg_hops";

/// Metrics written as plot series, in file-name form.
pub const PLOT_METRICS: [&str; 5] = ["miss_ratio", "drop_ratio", "avg_delay_ms", "max_delay_ms", "avg_hops"];

/// Mean over seeds of one (scenario, policy, routing, deadline, level) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub scenario: String,
    pub policy: String,
    pub routing: String,
    pub deadline_s: f64,
    pub level: u8,
    pub runs: usize,
    pub generated: f64,
    pub miss_ratio: f64,
    pub drop_ratio: f64,
    pub avg_delay_ms: f64,
    pub max_delay_ms: f64,
    pub avg_hops: f64,
}

impl AggregateRow {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "miss_ratio" => self.miss_ratio,
            "drop_ratio" => self.drop_ratio,
            "avg_delay_ms" => self.avg_delay_ms,
            "max_delay_ms" => self.max_delay_ms,
            "avg_hops" => self.avg_hops,
            _ => return None,
        })
    }
}

/// Averages rows over seeds. Input must be in canonical order, as produced
/// by the runner.
pub fn aggregate(rows: &[CsvRow]) -> Vec<AggregateRow> {
    let mut out: Vec<AggregateRow> = Vec::new();
    let same = |a: &AggregateRow, r: &CsvRow| {
        a.scenario == r.scenario
            && a.policy == r.policy
            && a.routing == r.routing
            && a.deadline_s == r.deadline_s
            && a.level == r.level
    };
    let mut members: Vec<Vec<&CsvRow>> = Vec::new();
    for r in rows {
        match out.last() {
            Some(a) if same(a, r) => members.last_mut().unwrap().push(r),
            _ => {
                out.push(AggregateRow {
                    scenario: r.scenario.clone(),
                    policy: r.policy.clone(),
                    routing: r.routing.clone(),
                    deadline_s: r.deadline_s,
                    level: r.level,
                    runs: 0,
                    generated: 0.0,
                    miss_ratio: 0.0,
                    drop_ratio: 0.0,
                    avg_delay_ms: 0.0,
                    max_delay_ms: 0.0,
                    avg_hops: 0.0,
                });
                members.push(vec![r]);
            }
        }
    }
    for (a, m) in out.iter_mut().zip(&members) {
        let n = m.len() as f64;
        let mean = |f: fn(&CsvRow) -> f64| m.iter().map(|r| f(r)).sum::<f64>() / n;
        a.runs = m.len();
        a.generated = mean(|r| r.generated as f64);
        a.miss_ratio = mean(|r| r.miss_ratio);
        a.drop_ratio = mean(|r| r.drop_ratio);
        a.avg_delay_ms = mean(|r| r.avg_delay_ms);
        a.max_delay_ms = mean(|r| r.max_delay_ms);
        a.avg_hops = mean(|r| r.avg_hops);
    }
    out
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, OutputError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err(path))
}

/// Series name of an aggregate row: the policy, qualified by routing,
/// traffic and level only where the aggregate mixes several of them.
fn series_names(rows: &[AggregateRow]) -> Vec<String> {
    let routings: BTreeSet<&str> = rows.iter().map(|r| r.routing.as_str()).collect();
    let scenarios: BTreeSet<&str> = rows.iter().map(|r| r.scenario.as_str()).collect();
    rows.iter()
        .map(|r| {
            let mut s = r.policy.clone();
            if routings.len() > 1 {
                s = format!("{s}-{}", r.routing);
            }
            if scenarios.len() > 1 {
                let traffic = r.scenario.split_once('-').map_or(r.scenario.as_str(), |(_, t)| t);
                s = format!("{s}-{traffic}");
            }
            if r.level > 0 {
                s = format!("{s}-l{}", r.level);
            }
            s
        })
        .collect()
}

/// Writes one `<family>_<series>_<metric>.dat` file per series and metric,
/// each holding `deadline value` lines, from an aggregate CSV.
pub fn emit_plot_data(aggregate_csv: &Path, out_dir: &Path, family: &str) -> Result<Vec<PathBuf>, OutputError> {
    if !aggregate_csv.exists() {
        return Err(OutputError::MissingAggregate(aggregate_csv.display().to_string()));
    }
    let rows: Vec<AggregateRow> = read_rows(aggregate_csv)?;
    let names = series_names(&rows);
    let mut series: BTreeMap<&str, Vec<&AggregateRow>> = BTreeMap::new();
    for (n, r) in names.iter().zip(&rows) {
        series.entry(n.as_str()).or_default().push(r);
    }
    let mut written = Vec::new();
    for (name, pts) in series {
        for metric in PLOT_METRICS {
            let mut text = String::new();
            for r in &pts {
                let v = r.metric(metric).expect("known metric");
                text.push_str(&format!("{} {}\n", r.deadline_s, v));
            }
            let path = out_dir.join(format!("{family}_{name}_{metric}.dat"));
            fs::write(&path, text).map_err(io_err(&path))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Paths produced by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct Outputs {
    pub raw: PathBuf,
    pub aggregate: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Writes `<name>_raw.csv`, `<name>_aggregate.csv` and the plot series into
/// `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, name: &str, result: &SweepResult) -> Result<Outputs, OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let raw = dir.join(format!("{name}_raw.csv"));
    if result.rows.is_empty() {
        fs::write(&raw, format!("{CSV_HEADER}\n")).map_err(io_err(&raw))?;
    } else {
        write_rows(&raw, &result.rows)?;
    }
    let aggregate_path = dir.join(format!("{name}_aggregate.csv"));
    let agg = aggregate(&result.rows);
    if agg.is_empty() {
        fs::write(&aggregate_path, format!("{AGGREGATE_HEADER}\n")).map_err(io_err(&aggregate_path))?;
    } else {
        write_rows(&aggregate_path, &agg)?;
    }
    let plots = emit_plot_data(&aggregate_path, dir, name)?;
    Ok(Outputs {
        raw,
        aggregate: aggregate_path,
        plots,
    })
}
