//! Deployments and traffic schedules.

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::routing::Point;
use crate::sim::{SimRng, SimTime};
use crate::{NodeId, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    Grid,
    Random,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Grid => "grid",
            TopologyKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    /// Sensor nodes; the grid uses the largest square lattice that fits.
    pub node_count: usize,
    pub area_side_m: f64,
    pub seed: u64,
}

impl Default for TopologySpec {
    fn default() -> Self {
        TopologySpec {
            kind: TopologyKind::Grid,
            node_count: 100,
            area_side_m: 1000.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub positions: Vec<Position>,
    pub sink: NodeId,
}

impl Topology {
    /// Every node except the sink.
    pub fn sources(&self) -> Vec<NodeId> {
        (0..self.positions.len()).filter(|&n| n != self.sink).collect()
    }
}

/// Grid: a `k x k` lattice with spacing `side / (k - 1)`, node `i * k + j`
/// at `(i * spacing, j * spacing)`; the sink is node 0 in the north-west
/// corner. Random: `node_count` uniform positions followed by a sink at the
/// center.
pub fn build_topology(spec: &TopologySpec) -> Result<Topology, SimError> {
    if spec.node_count == 0 || !(spec.area_side_m > 0.0) {
        return Err(SimError::InvalidConfig("topology needs nodes and a positive area".into()));
    }
    match spec.kind {
        TopologyKind::Grid => {
            let k = (spec.node_count as f64).sqrt().round() as usize;
            if k * k != spec.node_count || k < 2 {
                return Err(SimError::InvalidConfig(format!(
                    "grid needs a square node count of at least 4, got {}",
                    spec.node_count
                )));
            }
            let spacing = spec.area_side_m / (k - 1) as f64;
            let positions = (0..k)
                .flat_map(|i| (0..k).map(move |j| Point::new(i as f64 * spacing, j as f64 * spacing)))
                .collect();
            Ok(Topology { positions, sink: 0 })
        }
        TopologyKind::Random => {
            let mut rng = SimRng::new(spec.seed);
            let side = spec.area_side_m;
            let mut positions: Vec<Position> = (0..spec.node_count)
                .map(|_| {
                    let x = rng.unit() * side;
                    Point::new(x, rng.unit() * side)
                })
                .collect();
            positions.push(Point::new(side / 2.0, side / 2.0));
            Ok(Topology {
                sink: spec.node_count,
                positions,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficPattern {
    Constant,
    Bursty,
    TwoLevel,
    LoadI,
    LoadIi,
    LoadIii,
    /// Constant background traffic plus a few high-rate flows from randomly
    /// placed intermediate nodes.
    CongestionFlows,
}

impl TrafficPattern {
    pub fn as_str(self) -> &'static str {
        match self {
            TrafficPattern::Constant => "constant",
            TrafficPattern::Bursty => "bursty",
            TrafficPattern::TwoLevel => "two_level",
            TrafficPattern::LoadI => "load_i",
            TrafficPattern::LoadIi => "load_ii",
            TrafficPattern::LoadIii => "load_iii",
            TrafficPattern::CongestionFlows => "congestion_flows",
        }
    }

    pub fn is_two_level(self) -> bool {
        self == TrafficPattern::TwoLevel
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficSpec {
    pub pattern: TrafficPattern,
    pub rate_pps: f64,
    /// Deadline of single-level traffic, and of level 2 in two-level runs.
    pub deadline_s: f64,
    /// Number of sources; `None` means every non-sink node.
    pub source_count: Option<usize>,
    pub burst_period_s: f64,
    pub burst_on_s: f64,
    pub congestion_flow_count: usize,
    pub congestion_flow_rate_pps: f64,
    pub generation_s: f64,
}

impl Default for TrafficSpec {
    fn default() -> Self {
        TrafficSpec {
            pattern: TrafficPattern::Constant,
            rate_pps: 2.0,
            deadline_s: 1.0,
            source_count: None,
            burst_period_s: 10.0,
            burst_on_s: 5.0,
            congestion_flow_count: 2,
            congestion_flow_rate_pps: 10.0,
            generation_s: 120.0,
        }
    }
}

/// Source count and per-source rate of a load profile.
pub fn load_profile(pattern: TrafficPattern) -> Option<(usize, f64)> {
    match pattern {
        TrafficPattern::LoadI => Some((100, 1.0)),
        TrafficPattern::LoadIi => Some((100, 0.5)),
        TrafficPattern::LoadIii => Some((10, 1.0)),
        _ => None,
    }
}

/// One packet to be generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emission {
    pub at: SimTime,
    pub source: NodeId,
    pub level: u8,
    pub deadline_rel_us: u64,
}

/// Square-wave gate: open for the first `on_us` of every `period_us`.
pub fn gate_open(t: SimTime, period_us: u64, on_us: u64) -> bool {
    t.as_micros() % period_us < on_us
}

/// Periodic emission times of one source: `offset + k * interval` below `end`.
fn periodic(offset_us: u64, interval_us: u64, end_us: u64) -> impl Iterator<Item = SimTime> {
    (0..)
        .map(move |k: u64| offset_us + k * interval_us)
        .take_while(move |&t| t < end_us)
        .map(SimTime::from_micros)
}

/// Picks `count` distinct members of `pool` with a seeded partial shuffle,
/// returned in ascending order.
pub fn choose(pool: &[NodeId], count: usize, rng: &mut SimRng) -> Vec<NodeId> {
    let mut v = pool.to_vec();
    let count = count.min(v.len());
    for i in 0..count {
        let j = i + rng.below((v.len() - i) as u64) as usize;
        v.swap(i, j);
    }
    v.truncate(count);
    v.sort_unstable();
    v
}

fn interval_us(rate_pps: f64) -> u64 {
    (1e6 / rate_pps).round().max(1.0) as u64
}

/// The full emission schedule of a run, sorted by time then source.
///
/// Every periodic source starts at a phase drawn uniformly within its first
/// interval. Bursty and two-level traffic keep that phase but share one
/// common gate, so every node bursts in the same windows. Two-level sources
/// alternate level 1 and level 2 starting from a drawn level, level 1 carrying
/// half the deadline.
pub fn generate_traffic(spec: &TrafficSpec, topo: &Topology, rng: &mut SimRng) -> Result<Vec<Emission>, SimError> {
    if !(spec.rate_pps > 0.0) || !(spec.deadline_s > 0.0) || !(spec.generation_s >= 0.0) {
        return Err(SimError::InvalidConfig("traffic needs positive rate and deadline".into()));
    }
    let all = topo.sources();
    let end_us = crate::sim::secs_to_micros(spec.generation_s);
    let deadline_us = crate::sim::secs_to_micros(spec.deadline_s);
    if deadline_us == 0 {
        return Err(SimError::InvalidConfig("deadline rounds to zero microseconds".into()));
    }
    let (count, rate) = match load_profile(spec.pattern) {
        Some((n, r)) => (n, r),
        None => (spec.source_count.unwrap_or(all.len()), spec.rate_pps),
    };
    let sources = if count >= all.len() { all.clone() } else { choose(&all, count, rng) };
    let gate = match spec.pattern {
        TrafficPattern::Bursty | TrafficPattern::TwoLevel => {
            let p = crate::sim::secs_to_micros(spec.burst_period_s);
            let on = crate::sim::secs_to_micros(spec.burst_on_s);
            if p == 0 || on > p {
                return Err(SimError::InvalidConfig("burst gate needs 0 < on <= period".into()));
            }
            Some((p, on))
        }
        _ => None,
    };
    let two_level = spec.pattern.is_two_level();
    let interval = interval_us(rate);
    let mut out = Vec::new();
    for &s in &sources {
        let offset = rng.below(interval);
        let mut next_level = if two_level { 1 + rng.below(2) as u8 } else { 1 };
        for at in periodic(offset, interval, end_us) {
            if let Some((p, on)) = gate {
                if !gate_open(at, p, on) {
                    continue;
                }
            }
            let (level, deadline_rel_us) = if two_level {
                let l = next_level;
                next_level = 3 - next_level;
                (l, if l == 1 { deadline_us / 2 } else { deadline_us })
            } else {
                (0, deadline_us)
            };
            out.push(Emission {
                at,
                source: s,
                level,
                deadline_rel_us,
            });
        }
    }
    if spec.pattern == TrafficPattern::CongestionFlows && spec.congestion_flow_count > 0 {
        let flows = choose(&all, spec.congestion_flow_count, rng);
        let fi = interval_us(spec.congestion_flow_rate_pps);
        for &s in &flows {
            let offset = rng.below(fi);
            out.extend(periodic(offset, fi, end_us).map(|at| Emission {
                at,
                source: s,
                level: 0,
                deadline_rel_us: deadline_us,
            }));
        }
    }
    out.sort_by_key(|e| (e.at, e.source));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::neighbors_of;

    fn grid() -> Topology {
        build_topology(&TopologySpec::default()).unwrap()
    }

    #[test]
    fn grid_lattice_positions() {
        let t = grid();
        assert_eq!(t.positions.len(), 100);
        assert_eq!(t.sink, 0);
        for i in 0..10 {
            for j in 0..10 {
                let p = t.positions[i * 10 + j];
                assert!((p.x - i as f64 * 1000.0 / 9.0).abs() < 1e-9);
                assert!((p.y - j as f64 * 1000.0 / 9.0).abs() < 1e-9);
            }
        }
        assert_eq!(t.positions[t.sink], Point::new(0.0, 0.0));
    }

    #[test]
    fn grid_neighbor_counts_by_scan() {
        let t = grid();
        let s = 1000.0 / 9.0;
        for n in 0..100 {
            let (i, j) = ((n / 10) as i64, (n % 10) as i64);
            // lattice offsets within 250 m: |di|,|dj| <= 2 with s^2 (di^2 + dj^2) <= 250^2
            let mut expect = 0;
            for di in -2i64..=2 {
                for dj in -2i64..=2 {
                    let (a, b) = (i + di, j + dj);
                    if (di, dj) != (0, 0)
                        && (0..10).contains(&a)
                        && (0..10).contains(&b)
                        && ((di * di + dj * dj) as f64).sqrt() * s <= 250.0
                    {
                        expect += 1;
                    }
                }
            }
            let got = neighbors_of(&t.positions, n, 250.0).len();
            assert_eq!(got, expect, "node {n}");
            let corner = matches!(n, 0 | 9 | 90 | 99);
            // corner: (1,0) (0,1) (1,1) (2,0) (0,2) (2,1) (1,2); sqrt(5) * 111.1 = 248.4
            if corner {
                assert_eq!(got, 7);
            } else {
                assert!(got >= 7);
            }
        }
    }

    #[test]
    fn grid_symmetric_under_reflection() {
        let t = grid();
        for i in 0..10 {
            for j in 0..10 {
                let a = neighbors_of(&t.positions, i * 10 + j, 250.0).len();
                let b = neighbors_of(&t.positions, j * 10 + i, 250.0).len();
                let c = neighbors_of(&t.positions, (9 - i) * 10 + j, 250.0).len();
                assert_eq!(a, b);
                assert_eq!(a, c);
            }
        }
    }

    #[test]
    fn random_topology_replays() {
        let spec = TopologySpec {
            kind: TopologyKind::Random,
            seed: 7,
            ..TopologySpec::default()
        };
        let a = build_topology(&spec).unwrap();
        assert_eq!(a, build_topology(&spec).unwrap());
        assert_eq!(a.positions.len(), 101);
        assert_eq!(a.sink, 100);
        assert_eq!(a.positions[100], Point::new(500.0, 500.0));
        assert!(a.positions.iter().all(|p| (0.0..=1000.0).contains(&p.x) && (0.0..=1000.0).contains(&p.y)));
    }

    fn hundred_sources() -> Topology {
        let mut t = build_topology(&TopologySpec {
            kind: TopologyKind::Random,
            ..TopologySpec::default()
        })
        .unwrap();
        t.sink = 100;
        t
    }

    #[test]
    fn constant_count_closed_form() {
        let mut rng = SimRng::new(1);
        let e = generate_traffic(&TrafficSpec::default(), &hundred_sources(), &mut rng).unwrap();
        assert_eq!(e.len(), 100 * 2 * 120);
        assert!(e.windows(2).all(|w| (w[0].at, w[0].source) <= (w[1].at, w[1].source)));
        assert!(e.iter().all(|x| x.deadline_rel_us == 1_000_000 && x.source != 100));
    }

    #[test]
    fn constant_one_pps_ten_seconds() {
        let mut rng = SimRng::new(1);
        let spec = TrafficSpec {
            rate_pps: 1.0,
            generation_s: 10.0,
            ..TrafficSpec::default()
        };
        let e = generate_traffic(&spec, &grid(), &mut rng).unwrap();
        for s in 1..100 {
            assert_eq!(e.iter().filter(|x| x.source == s).count(), 10);
        }
    }

    #[test]
    fn zero_sources_zero_packets() {
        let mut rng = SimRng::new(1);
        let spec = TrafficSpec {
            source_count: Some(0),
            ..TrafficSpec::default()
        };
        assert!(generate_traffic(&spec, &grid(), &mut rng).unwrap().is_empty());
    }

    #[test]
    fn bursty_gate_and_half_count() {
        let (p, on) = (10_000_000, 5_000_000);
        assert!(gate_open(SimTime::from_secs(3), p, on));
        assert!(!gate_open(SimTime::from_secs(7), p, on));
        assert!(gate_open(SimTime::from_secs(12), p, on));
        let mut rng = SimRng::new(4);
        let spec = TrafficSpec {
            pattern: TrafficPattern::Bursty,
            ..TrafficSpec::default()
        };
        let e = generate_traffic(&spec, &hundred_sources(), &mut rng).unwrap();
        assert_eq!(e.len(), 100 * 2 * 120 / 2);
        assert!(e.iter().all(|x| gate_open(x.at, p, on)));
    }

    #[test]
    fn two_level_alternates_with_half_deadline() {
        let mut rng = SimRng::new(5);
        let spec = TrafficSpec {
            pattern: TrafficPattern::TwoLevel,
            deadline_s: 2.0,
            ..TrafficSpec::default()
        };
        let e = generate_traffic(&spec, &grid(), &mut rng).unwrap();
        for s in [1, 50, 99] {
            let levels: Vec<(u8, u64)> = e
                .iter()
                .filter(|x| x.source == s)
                .map(|x| (x.level, x.deadline_rel_us))
                .collect();
            assert_eq!(levels.len(), 120);
            let first = levels[0].0;
            for (k, &(l, d)) in levels.iter().enumerate() {
                assert_eq!(l, if k % 2 == 0 { first } else { 3 - first });
                assert_eq!(d, if l == 1 { 1_000_000 } else { 2_000_000 });
            }
        }
        let starts: std::collections::BTreeSet<u8> = (1..100)
            .filter_map(|s| e.iter().find(|x| x.source == s).map(|x| x.level))
            .collect();
        assert_eq!(starts.len(), 2, "sources do not all start on the same level");
    }

    #[test]
    fn load_profiles_aggregate_rates() {
        let t = hundred_sources();
        for (pat, pps) in [
            (TrafficPattern::LoadI, 100.0),
            (TrafficPattern::LoadIi, 50.0),
            (TrafficPattern::LoadIii, 10.0),
        ] {
            let (n, r) = load_profile(pat).unwrap();
            assert_eq!(n as f64 * r, pps);
            let spec = TrafficSpec {
                pattern: pat,
                ..TrafficSpec::default()
            };
            let e = generate_traffic(&spec, &t, &mut SimRng::new(2)).unwrap();
            assert_eq!(e.len() as f64, pps * 120.0);
        }
        let e = generate_traffic(
            &TrafficSpec {
                pattern: TrafficPattern::LoadIii,
                ..TrafficSpec::default()
            },
            &t,
            &mut SimRng::new(2),
        )
        .unwrap();
        let mut srcs: Vec<_> = e.iter().map(|x| x.source).collect();
        srcs.dedup();
        srcs.sort();
        srcs.dedup();
        assert_eq!(srcs.len(), 10);
    }

    #[test]
    fn congestion_flows_add_traffic() {
        let spec = TrafficSpec {
            pattern: TrafficPattern::CongestionFlows,
            ..TrafficSpec::default()
        };
        let e = generate_traffic(&spec, &grid(), &mut SimRng::new(3)).unwrap();
        assert_eq!(e.len(), 99 * 240 + 2 * 1200);
    }

    #[test]
    fn every_emission_is_valid() {
        let t = grid();
        for pat in [TrafficPattern::Constant, TrafficPattern::Bursty, TrafficPattern::TwoLevel] {
            let spec = TrafficSpec {
                pattern: pat,
                deadline_s: 0.3,
                ..TrafficSpec::default()
            };
            for x in generate_traffic(&spec, &t, &mut SimRng::new(8)).unwrap() {
                assert!(x.deadline_rel_us > 0);
                assert!(x.source != t.sink && x.source < t.positions.len());
            }
        }
    }
}
