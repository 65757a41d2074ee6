//! Simplified SPEED forwarding: neighbor tables built from position beacons,
//! per-neighbor one-hop delay estimates, and the three next-hop selectors
//! (stateless non-deterministic forwarding against a relay-speed setpoint,
//! minimum delay first, maximum relay speed first).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::routing::progress;
use crate::sim::SimRng;
use crate::{Ewma, NodeId, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedVariant {
    Speed,
    SpeedT,
    SpeedS,
}

impl SpeedVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            SpeedVariant::Speed => "speed",
            SpeedVariant::SpeedT => "speed_t",
            SpeedVariant::SpeedS => "speed_s",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedConfig {
    pub setpoint_mps: f64,
    pub beacon_period_s: f64,
    pub variant: SpeedVariant,
}

impl Default for SpeedConfig {
    fn default() -> Self {
        SpeedConfig {
            setpoint_mps: 1000.0,
            beacon_period_s: 1.0,
            variant: SpeedVariant::Speed,
        }
    }
}

impl SpeedConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.setpoint_mps > 0.0) {
            return Err(SimError::InvalidConfig("speed_setpoint_mps must be positive".into()));
        }
        if !(self.beacon_period_s > 0.0) {
            return Err(SimError::InvalidConfig("beacon_period_s must be positive".into()));
        }
        Ok(())
    }
}

/// Why SPEED gave up on a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedDrop {
    /// No neighbor makes positive progress.
    Void,
    /// No neighbor meets the setpoint and the relay-ratio draw rejected it.
    Setpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedNeighbor {
    pub id: NodeId,
    pub pos: Position,
    /// One-hop delay toward this neighbor, microseconds.
    pub hop_delay: Ewma,
    /// Smoothed indicator of this neighbor's relay speed falling short of
    /// the setpoint.
    pub miss: Ewma,
}

impl SpeedNeighbor {
    pub fn progress_to(&self, here: &Position, dest: &Position) -> f64 {
        progress(here, &self.pos, dest)
    }
}

/// One forwarding-set member as seen from the current node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub id: NodeId,
    pub progress_m: f64,
    pub hop_delay_us: f64,
    pub miss: f64,
}

impl Candidate {
    /// Progress toward the destination per second of one-hop delay.
    pub fn relay_speed(&self) -> f64 {
        self.progress_m / (self.hop_delay_us / 1e6)
    }
}

/// Neighbor table of one node.
#[derive(Debug, Clone)]
pub struct SpeedTable {
    here: Position,
    beta: f64,
    nominal_us: f64,
    neighbors: BTreeMap<NodeId, SpeedNeighbor>,
}

impl SpeedTable {
    pub fn new(here: Position, beta: f64, nominal_us: f64) -> Self {
        SpeedTable {
            here,
            beta,
            nominal_us,
            neighbors: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn get(&self, id: NodeId) -> Option<&SpeedNeighbor> {
        self.neighbors.get(&id)
    }

    /// Records a beacon; known entries keep their delay history.
    pub fn on_beacon(&mut self, id: NodeId, pos: Position) {
        let (beta, nominal) = (self.beta, self.nominal_us);
        self.neighbors
            .entry(id)
            .and_modify(|n| n.pos = pos)
            .or_insert_with(|| SpeedNeighbor {
                id,
                pos,
                hop_delay: Ewma::new(beta, nominal),
                miss: Ewma::new(beta, 0.0),
            });
    }

    /// Folds a measured one-hop delay toward `id` into its estimate and
    /// updates the neighbor's setpoint-miss history for `dest`.
    pub fn observe_delay(&mut self, id: NodeId, sample_us: f64, dest: &Position, setpoint_mps: f64) {
        let here = self.here;
        if let Some(n) = self.neighbors.get_mut(&id) {
            n.hop_delay.observe(sample_us.max(1.0));
            let speed = n.progress_to(&here, dest) / (n.hop_delay.value() / 1e6);
            n.miss.observe(if speed < setpoint_mps { 1.0 } else { 0.0 });
        }
    }

    /// Neighbors making positive progress toward `dest`, in id order.
    pub fn forwarding_set(&self, dest: &Position) -> Vec<Candidate> {
        self.neighbors
            .values()
            .filter_map(|n| {
                let p = n.progress_to(&self.here, dest);
                (p > 0.0).then_some(Candidate {
                    id: n.id,
                    progress_m: p,
                    hop_delay_us: n.hop_delay.value(),
                    miss: n.miss.value(),
                })
            })
            .collect()
    }

    pub fn select(
        &self,
        dest: &Position,
        cfg: &SpeedConfig,
        rng: &mut SimRng,
    ) -> Result<NodeId, SpeedDrop> {
        let fs = self.forwarding_set(dest);
        match cfg.variant {
            SpeedVariant::Speed => sngf_select(&fs, cfg.setpoint_mps, rng),
            SpeedVariant::SpeedT => speed_t_select(&fs),
            SpeedVariant::SpeedS => speed_s_select(&fs),
        }
    }
}

/// Fraction of the forwarding set expected to relay at or above the setpoint.
pub fn relay_ratio(fs: &[Candidate]) -> f64 {
    if fs.is_empty() {
        return 0.0;
    }
    1.0 - fs.iter().map(|c| c.miss).sum::<f64>() / fs.len() as f64
}

/// Stateless non-deterministic forwarding. Members meeting the setpoint are
/// chosen at random in proportion to their relay speed. When none does, the
/// packet is dropped with probability `1 - relay_ratio` and otherwise sent to
/// the fastest member.
pub fn sngf_select(fs: &[Candidate], setpoint_mps: f64, rng: &mut SimRng) -> Result<NodeId, SpeedDrop> {
    if fs.is_empty() {
        return Err(SpeedDrop::Void);
    }
    let fast: Vec<(NodeId, f64)> = fs
        .iter()
        .map(|c| (c.id, c.relay_speed()))
        .filter(|&(_, s)| s >= setpoint_mps)
        .collect();
    if !fast.is_empty() {
        let total: f64 = fast.iter().map(|&(_, s)| s).sum();
        let mut pick = rng.unit() * total;
        for &(id, s) in &fast {
            if pick < s {
                return Ok(id);
            }
            pick -= s;
        }
        return Ok(fast[fast.len() - 1].0);
    }
    if rng.bernoulli(1.0 - relay_ratio(fs)) {
        return Err(SpeedDrop::Setpoint);
    }
    speed_s_select(fs)
}

/// Minimum one-hop delay first; ties go to the lowest id.
pub fn speed_t_select(fs: &[Candidate]) -> Result<NodeId, SpeedDrop> {
    fs.iter()
        .min_by(|a, b| a.hop_delay_us.total_cmp(&b.hop_delay_us).then(a.id.cmp(&b.id)))
        .map(|c| c.id)
        .ok_or(SpeedDrop::Void)
}

/// Maximum relay speed first; ties go to the lowest id.
pub fn speed_s_select(fs: &[Candidate]) -> Result<NodeId, SpeedDrop> {
    fs.iter()
        .min_by(|a, b| b.relay_speed().total_cmp(&a.relay_speed()).then(a.id.cmp(&b.id)))
        .map(|c| c.id)
        .ok_or(SpeedDrop::Void)
}
