use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::family::Family;
use crate::network::SimConfig;
use crate::radio::RadioConfig;
use crate::routing::{OneHopRule, RoutingMode};
use crate::rtsched::{Policy, SchedulerConfig};
use crate::scenarios::{TopologyKind, TopologySpec, TrafficPattern, TrafficSpec};
use crate::speed::{SpeedConfig, SpeedVariant};
use crate::SimError;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot serialize config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error(transparent)]
    Invalid(#[from] SimError),
}

/// A config value that may be written as a single item or as a list.
/// Always serialized as a list.
#[derive(Debug, Clone, PartialEq)]
pub struct OneOrMany<T>(pub Vec<T>);

impl<T> OneOrMany<T> {
    pub fn one(t: T) -> Self {
        OneOrMany(vec![t])
    }
}

impl<T> From<Vec<T>> for OneOrMany<T> {
    fn from(v: Vec<T>) -> Self {
        OneOrMany(v)
    }
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for OneOrMany<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Many(Vec<T>),
            One(T),
        }
        Ok(match Repr::<T>::deserialize(d)? {
            Repr::Many(v) => OneOrMany(v),
            Repr::One(t) => OneOrMany(vec![t]),
        })
    }
}

impl<T: Serialize> Serialize for OneOrMany<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A (policy, routing) pair written as `"policy/routing"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Series {
    pub policy: Policy,
    pub routing: RoutingMode,
}

impl Series {
    pub fn new(policy: Policy, routing: RoutingMode) -> Self {
        Series { policy, routing }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.policy.as_str(), self.routing.as_str())
    }
}

impl std::str::FromStr for Series {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        let (p, r) = s
            .split_once('/')
            .ok_or_else(|| SimError::InvalidConfig(format!("series {s:?} is not policy/routing")))?;
        let routing = match r {
            "sp" => RoutingMode::Sp,
            "gf" => RoutingMode::Gf,
            "speed" => RoutingMode::Speed,
            _ => return Err(SimError::InvalidConfig(format!("unknown routing {r:?}"))),
        };
        Ok(Series::new(p.parse()?, routing))
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Flat experiment description. Every key is optional.
///
/// | key | default |
/// |---|---|
/// | `tx_range_m`, `interference_range_m` | 250, 550 |
/// | `bandwidth_bps` | 2000000 |
/// | `slot_us`, `difs_us`, `cw_min`, `cw_max`, `retry_limit` | 20, 50, 31, 1023, 7 |
/// | `etd_beta` | 0.8 |
/// | `routing` | `"sp"` (one value or a list) |
/// | `routing_period_s` | 5 |
/// | `gf_one_hop` | `"progress"` |
/// | `policy` | `"jits_d"` (one value or a list) |
/// | `series` | empty; a list of `"policy/routing"` pairs replacing the policy x routing product |
/// | `alpha`, `queue_capacity`, `idle_detection` | 0.7, 64, false |
/// | `vms_t1_mps`, `vms_t2_mps` | 500, 1500 |
/// | `speed_setpoint_mps`, `speed_variant`, `beacon_period_s` | 1000, `"speed"`, 1 |
/// | `topology` | `"grid"` |
/// | `traffic` | `"constant"` (one value or a list) |
/// | `rate_pps` | 2 |
/// | `deadline_s` | 1 |
/// | `deadline_sweep` | unset; `[start, stop, step]` overrides `deadline_s` |
/// | `topo_seed` | unset: random deployments follow the run seed |
/// | `congestion_flow_count`, `congestion_flow_rate_pps` | 2, 10 |
/// | `generation_s`, `drain_s` | 120, 10 |
/// | `seeds` | `[1, 2, 3]`; an empty list means `[1]` |
/// | `out` | `"results"` |
/// | `family` | unset; names the outputs and supplies that family's preset |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub tx_range_m: f64,
    pub interference_range_m: f64,
    pub bandwidth_bps: u64,
    pub slot_us: u64,
    pub difs_us: u64,
    pub cw_min: u32,
    pub cw_max: u32,
    pub retry_limit: u32,
    pub etd_beta: f64,
    pub routing: OneOrMany<RoutingMode>,
    pub routing_period_s: f64,
    pub gf_one_hop: OneHopRule,
    pub policy: OneOrMany<Policy>,
    pub series: Vec<Series>,
    pub alpha: f64,
    pub queue_capacity: usize,
    pub idle_detection: bool,
    pub vms_t1_mps: f64,
    pub vms_t2_mps: f64,
    pub speed_setpoint_mps: f64,
    pub speed_variant: SpeedVariant,
    pub beacon_period_s: f64,
    pub topology: TopologyKind,
    pub traffic: OneOrMany<TrafficPattern>,
    pub rate_pps: f64,
    pub deadline_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deadline_sweep: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topo_seed: Option<u64>,
    pub congestion_flow_count: usize,
    pub congestion_flow_rate_pps: f64,
    pub generation_s: f64,
    pub drain_s: f64,
    pub seeds: Vec<u64>,
    pub out: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let sim = SimConfig::default();
        let r = &sim.radio;
        ExperimentConfig {
            tx_range_m: r.tx_range_m,
            interference_range_m: r.interference_range_m,
            bandwidth_bps: r.bandwidth_bps,
            slot_us: r.slot_us,
            difs_us: r.difs_us,
            cw_min: r.cw_min,
            cw_max: r.cw_max,
            retry_limit: r.retry_limit,
            etd_beta: r.etd_beta,
            routing: OneOrMany::one(sim.routing),
            routing_period_s: sim.routing_period_s,
            gf_one_hop: sim.gf_one_hop,
            policy: OneOrMany::one(sim.sched.policy),
            series: Vec::new(),
            alpha: sim.sched.alpha,
            queue_capacity: sim.sched.queue_capacity,
            idle_detection: sim.sched.idle_detection,
            vms_t1_mps: sim.sched.vms_thresholds.0,
            vms_t2_mps: sim.sched.vms_thresholds.1,
            speed_setpoint_mps: sim.speed.setpoint_mps,
            speed_variant: sim.speed.variant,
            beacon_period_s: sim.speed.beacon_period_s,
            topology: sim.topology.kind,
            traffic: OneOrMany::one(sim.traffic.pattern),
            rate_pps: sim.traffic.rate_pps,
            deadline_s: sim.traffic.deadline_s,
            deadline_sweep: None,
            topo_seed: None,
            congestion_flow_count: sim.traffic.congestion_flow_count,
            congestion_flow_rate_pps: sim.traffic.congestion_flow_rate_pps,
            generation_s: sim.traffic.generation_s,
            drain_s: sim.drain_s,
            seeds: vec![1, 2, 3],
            out: "results".to_string(),
            family: None,
        }
    }
}

/// One cell of the sweep matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub traffic: TrafficPattern,
    pub series: Series,
    pub deadline_s: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Parses a TOML document. When it names a `family`, that family's
    /// preset supplies every key the document leaves out.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse()?;
        let merged = match table.get("family") {
            Some(v) => {
                let family: Family = v.clone().try_into()?;
                let mut base = toml::Table::try_from(family.preset())?;
                base.extend(table);
                base
            }
            None => table,
        };
        let cfg: ExperimentConfig = merged.try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if self.series.is_empty() && (self.policy.0.is_empty() || self.routing.0.is_empty()) {
            return bad("need at least one policy and one routing");
        }
        if self.traffic.0.is_empty() {
            return bad("need at least one traffic pattern");
        }
        if let Some([start, stop, step]) = self.deadline_sweep {
            if !(start > 0.0 && stop >= start && step > 0.0) {
                return bad("deadline_sweep must be [start > 0, stop >= start, step > 0]");
            }
        }
        for d in self.deadlines() {
            for traffic in &self.traffic.0 {
                self.sim_config(&RunSpec {
                    traffic: *traffic,
                    series: self.series()[0],
                    deadline_s: d,
                    seed: 1,
                })
                .validate()?;
            }
        }
        Ok(())
    }

    /// Deadlines of the sweep, in seconds, rounded to whole microseconds.
    pub fn deadlines(&self) -> Vec<f64> {
        match self.deadline_sweep {
            None => vec![self.deadline_s],
            Some([start, stop, step]) => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n)
                    .map(|i| ((start + i as f64 * step) * 1e6).round() / 1e6)
                    .collect()
            }
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![1]
        } else {
            self.seeds.clone()
        }
    }

    /// The (policy, routing) pairs to run.
    pub fn series(&self) -> Vec<Series> {
        if !self.series.is_empty() {
            return self.series.clone();
        }
        let mut out = Vec::new();
        for &r in &self.routing.0 {
            for &p in &self.policy.0 {
                out.push(Series::new(p, r));
            }
        }
        out
    }

    /// Full sweep matrix: traffic x series x deadline x seed.
    pub fn runs(&self) -> Vec<RunSpec> {
        let mut out = Vec::new();
        for &traffic in &self.traffic.0 {
            for series in self.series() {
                for deadline_s in self.deadlines() {
                    for seed in self.seeds() {
                        out.push(RunSpec {
                            traffic,
                            series,
                            deadline_s,
                            seed,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn sim_config(&self, run: &RunSpec) -> SimConfig {
        SimConfig {
            seed: run.seed,
            topology: TopologySpec {
                kind: self.topology,
                seed: self.topo_seed.unwrap_or(run.seed),
                ..TopologySpec::default()
            },
            radio: RadioConfig {
                tx_range_m: self.tx_range_m,
                interference_range_m: self.interference_range_m,
                bandwidth_bps: self.bandwidth_bps,
                slot_us: self.slot_us,
                difs_us: self.difs_us,
                cw_min: self.cw_min,
                cw_max: self.cw_max,
                retry_limit: self.retry_limit,
                etd_beta: self.etd_beta,
                ..RadioConfig::default()
            },
            routing: run.series.routing,
            gf_one_hop: self.gf_one_hop,
            routing_period_s: self.routing_period_s,
            sched: SchedulerConfig {
                policy: run.series.policy,
                alpha: self.alpha,
                queue_capacity: self.queue_capacity,
                idle_detection: self.idle_detection,
                vms_thresholds: (self.vms_t1_mps, self.vms_t2_mps),
            },
            speed: SpeedConfig {
                setpoint_mps: self.speed_setpoint_mps,
                beacon_period_s: self.beacon_period_s,
                variant: self.speed_variant,
            },
            traffic: TrafficSpec {
                pattern: run.traffic,
                rate_pps: self.rate_pps,
                deadline_s: run.deadline_s,
                congestion_flow_count: self.congestion_flow_count,
                congestion_flow_rate_pps: self.congestion_flow_rate_pps,
                generation_s: self.generation_s,
                ..TrafficSpec::default()
            },
            drain_s: self.drain_s,
        }
    }

    /// Name used for output files.
    pub fn name(&self) -> &'static str {
        self.family.map(Family::as_str).unwrap_or("experiment")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn defaults_match_the_simulator() {
        let c = ExperimentConfig::default();
        let run = &c.runs()[0];
        let mut expect = SimConfig::default();
        expect.seed = run.seed;
        assert_eq!(c.sim_config(run), expect);
        assert_eq!(c.seeds(), vec![1, 2, 3]);
    }

    #[test]
    fn scalar_or_list() {
        let a = ExperimentConfig::from_toml("policy = \"vms_s\"").unwrap();
        assert_eq!(a.policy.0, vec![Policy::VmsS]);
        let b = ExperimentConfig::from_toml("policy = [\"jits_s\", \"jits_nl\"]\nrouting = [\"sp\", \"gf\"]").unwrap();
        assert_eq!(b.series().len(), 4);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("alhpa = 0.5").is_err());
        assert!(ExperimentConfig::from_toml("policy = \"edf\"").is_err());
        assert!(ExperimentConfig::from_toml("alpha = 1.5").is_err());
    }

    #[test]
    fn sweep_points() {
        let c = ExperimentConfig::from_toml("deadline_sweep = [0.1, 3.0, 0.1]").unwrap();
        let d = c.deadlines();
        assert_eq!(d.len(), 30);
        assert_eq!(d[2], 0.3);
        assert_eq!(d[29], 3.0);
        let c = ExperimentConfig::from_toml("deadline_sweep = [0.5, 2.0, 0.5]").unwrap();
        assert_eq!(c.deadlines(), vec![0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn empty_seed_list_means_seed_one() {
        let c = ExperimentConfig::from_toml("seeds = []").unwrap();
        assert_eq!(c.seeds(), vec![1]);
    }

    #[test]
    fn matrix_size() {
        let c = ExperimentConfig::from_toml(
            "policy = [\"jits_s\", \"jits_d\", \"vms_s\", \"vms_d\"]\nrouting = \"gf\"\ndeadline_sweep = [0.5, 2.0, 0.5]",
        )
        .unwrap();
        assert_eq!(c.runs().len(), 4 * 4 * 3);
    }

    #[test]
    fn explicit_series() {
        let c = ExperimentConfig::from_toml("series = [\"jits_d/sp\", \"fifo/speed\"]").unwrap();
        assert_eq!(
            c.series(),
            vec![
                Series::new(Policy::JitsD, RoutingMode::Sp),
                Series::new(Policy::Fifo, RoutingMode::Speed)
            ]
        );
        assert!(ExperimentConfig::from_toml("series = [\"jits_d\"]").is_err());
    }

    #[test]
    fn family_preset_underlies_the_document() {
        let c = ExperimentConfig::from_toml("family = \"bursty\"\nseeds = [7]").unwrap();
        let p = Family::Bursty.preset();
        assert_eq!(c.seeds, vec![7]);
        assert_eq!(c.traffic, p.traffic);
        assert_eq!(c.deadline_sweep, p.deadline_sweep);
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::default();
        c.deadline_sweep = Some([0.25, 3.0, 0.25]);
        c.topo_seed = Some(9);
        c.series = vec![Series::new(Policy::Fifo, RoutingMode::Speed)];
        let again = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
        for f in Family::ALL {
            let p = f.preset();
            assert_eq!(ExperimentConfig::from_toml(&p.to_toml().unwrap()).unwrap(), p, "{f:?}");
        }
    }
}
