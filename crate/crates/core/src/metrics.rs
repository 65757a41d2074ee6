//! Packet fates and per-run statistics.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::rtsched::{Packet, PacketId};
use crate::sim::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DropCause {
    Mac,
    GfVoid,
    NoRoute,
    SpeedVoid,
    SpeedSetpoint,
    VmsOverflow,
    FifoOverflow,
    DrainEnd,
}

/// CSV column a drop is reported under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropColumn {
    Mac,
    Routing,
    Speed,
    Drain,
}

impl DropCause {
    pub const ALL: [DropCause; 8] = [
        DropCause::Mac,
        DropCause::GfVoid,
        DropCause::NoRoute,
        DropCause::SpeedVoid,
        DropCause::SpeedSetpoint,
        DropCause::VmsOverflow,
        DropCause::FifoOverflow,
        DropCause::DrainEnd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DropCause::Mac => "mac",
            DropCause::GfVoid => "gf-void",
            DropCause::NoRoute => "no-route",
            DropCause::SpeedVoid => "speed-void",
            DropCause::SpeedSetpoint => "speed-setpoint",
            DropCause::VmsOverflow => "vms-overflow",
            DropCause::FifoOverflow => "fifo-overflow",
            DropCause::DrainEnd => "drain-end",
        }
    }

    pub fn column(self) -> DropColumn {
        match self {
            DropCause::Mac => DropColumn::Mac,
            DropCause::GfVoid | DropCause::NoRoute | DropCause::VmsOverflow | DropCause::FifoOverflow => {
                DropColumn::Routing
            }
            DropCause::SpeedVoid | DropCause::SpeedSetpoint => DropColumn::Speed,
            DropCause::DrainEnd => DropColumn::Drain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    OnTime,
    Late,
    Dropped(DropCause),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketFate {
    pub id: PacketId,
    pub outcome: Outcome,
    /// End-to-end delay, microseconds; zero for drops.
    pub delay_us: u64,
    pub hops: u32,
    pub level: u8,
}

/// Counters for one run, or for one deadline level of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub generated: u64,
    pub on_time: u64,
    pub late: u64,
    pub dropped: BTreeMap<DropCause, u64>,
    pub delay_sum_us: u128,
    pub max_delay_us: u64,
    pub hop_sum: u64,
}

impl RunMetrics {
    fn add(&mut self, f: &PacketFate) {
        self.generated += 1;
        match f.outcome {
            Outcome::OnTime | Outcome::Late => {
                if f.outcome == Outcome::OnTime {
                    self.on_time += 1;
                } else {
                    self.late += 1;
                }
                self.delay_sum_us += f.delay_us as u128;
                self.max_delay_us = self.max_delay_us.max(f.delay_us);
                self.hop_sum += f.hops as u64;
            }
            Outcome::Dropped(c) => *self.dropped.entry(c).or_default() += 1,
        }
    }

    pub fn delivered(&self) -> u64 {
        self.on_time + self.late
    }

    pub fn dropped_total(&self) -> u64 {
        self.dropped.values().sum()
    }

    pub fn dropped_by(&self, cause: DropCause) -> u64 {
        self.dropped.get(&cause).copied().unwrap_or(0)
    }

    pub fn dropped_in(&self, column: DropColumn) -> u64 {
        self.dropped
            .iter()
            .filter(|(c, _)| c.column() == column)
            .map(|(_, n)| n)
            .sum()
    }

    /// Fraction of generated packets not delivered by their deadline.
    pub fn miss_ratio(&self) -> f64 {
        if self.generated == 0 {
            return 0.0;
        }
        (self.generated - self.on_time) as f64 / self.generated as f64
    }

    pub fn drop_ratio(&self) -> f64 {
        if self.generated == 0 {
            return 0.0;
        }
        self.dropped_total() as f64 / self.generated as f64
    }

    pub fn avg_delay_us(&self) -> f64 {
        match self.delivered() {
            0 => 0.0,
            n => self.delay_sum_us as f64 / n as f64,
        }
    }

    pub fn avg_hops(&self) -> f64 {
        match self.delivered() {
            0 => 0.0,
            n => self.hop_sum as f64 / n as f64,
        }
    }

    /// on_time + late + dropped == generated
    pub fn is_conserved(&self) -> bool {
        self.on_time + self.late + self.dropped_total() == self.generated
    }
}

/// Tracks one fate per generated packet.
#[derive(Debug, Default)]
pub struct FateLog {
    fates: Vec<Option<PacketFate>>,
    levels: Vec<u8>,
    duplicate_deliveries: u64,
}

impl FateLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a newly generated packet; ids must be dense from zero.
    pub fn generated(&mut self, packet: &Packet) {
        assert_eq!(packet.id as usize, self.fates.len(), "packet ids must be dense");
        self.fates.push(None);
        self.levels.push(packet.level);
    }

    pub fn generated_count(&self) -> usize {
        self.fates.len()
    }

    pub fn duplicate_deliveries(&self) -> u64 {
        self.duplicate_deliveries
    }

    pub fn fate(&self, id: PacketId) -> Option<PacketFate> {
        self.fates.get(id as usize).copied().flatten()
    }

    /// Arrival at the sink. The deadline boundary is closed.
    pub fn record_delivery(&mut self, packet: &Packet, at: SimTime) -> Option<PacketFate> {
        let slot = &mut self.fates[packet.id as usize];
        if slot.is_some() {
            self.duplicate_deliveries += 1;
            warn!("packet {} delivered twice", packet.id);
            return None;
        }
        let outcome = if at <= packet.deadline_abs() {
            Outcome::OnTime
        } else {
            Outcome::Late
        };
        let f = PacketFate {
            id: packet.id,
            outcome,
            delay_us: at.since(packet.created_at),
            hops: packet.hops,
            level: packet.level,
        };
        *slot = Some(f);
        Some(f)
    }

    pub fn record_drop(&mut self, packet: &Packet, cause: DropCause) -> PacketFate {
        let slot = &mut self.fates[packet.id as usize];
        assert!(slot.is_none(), "packet {} already has a fate", packet.id);
        let f = PacketFate {
            id: packet.id,
            outcome: Outcome::Dropped(cause),
            delay_us: 0,
            hops: packet.hops,
            level: packet.level,
        };
        *slot = Some(f);
        f
    }

    /// Closes the log: unresolved packets become drain-end drops. Returns
    /// totals and per-level metrics.
    pub fn finalize(mut self) -> Finalized {
        let mut total = RunMetrics::default();
        let mut per_level: BTreeMap<u8, RunMetrics> = BTreeMap::new();
        for (i, slot) in self.fates.iter_mut().enumerate() {
            let f = slot.get_or_insert(PacketFate {
                id: i as PacketId,
                outcome: Outcome::Dropped(DropCause::DrainEnd),
                delay_us: 0,
                hops: 0,
                level: self.levels[i],
            });
            total.add(f);
            per_level.entry(f.level).or_default().add(f);
        }
        if total.generated == 0 {
            warn!("run generated no packets; ratios reported as zero");
        }
        assert!(total.is_conserved());
        assert!(total.drop_ratio() <= total.miss_ratio(), "drop ratio exceeds miss ratio");
        Finalized {
            total,
            per_level,
            duplicate_deliveries: self.duplicate_deliveries,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finalized {
    pub total: RunMetrics,
    pub per_level: BTreeMap<u8, RunMetrics>,
    pub duplicate_deliveries: u64,
}

pub const CSV_HEADER: &str = "scenario,policy,routing,deadline_s,level,seed,generated,on_time,late,dropped_mac,dropped_routing,dropped_speed,dropped_drain,miss_ratio,drop_ratio,avg_delay_ms,max_delay_ms,avg_hops";

/// One line of the raw results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scenario: String,
    pub policy: String,
    pub routing: String,
    pub deadline_s: f64,
    pub level: u8,
    pub seed: u64,
    pub generated: u64,
    pub on_time: u64,
    pub late: u64,
    pub dropped_mac: u64,
    pub dropped_routing: u64,
    pub dropped_speed: u64,
    pub dropped_drain: u64,
    pub miss_ratio: f64,
    pub drop_ratio: f64,
    pub avg_delay_ms: f64,
    pub max_delay_ms: f64,
    pub avg_hops: f64,
}

/// Identifies the run a row belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLabel {
    pub scenario: String,
    pub policy: String,
    pub routing: String,
    pub deadline_s: f64,
    pub seed: u64,
}

impl CsvRow {
    pub fn new(label: &RunLabel, level: u8, m: &RunMetrics) -> Self {
        CsvRow {
            scenario: label.scenario.clone(),
            policy: label.policy.clone(),
            routing: label.routing.clone(),
            deadline_s: label.deadline_s,
            level,
            seed: label.seed,
            generated: m.generated,
            on_time: m.on_time,
            late: m.late,
            dropped_mac: m.dropped_in(DropColumn::Mac),
            dropped_routing: m.dropped_in(DropColumn::Routing),
            dropped_speed: m.dropped_in(DropColumn::Speed),
            dropped_drain: m.dropped_in(DropColumn::Drain),
            miss_ratio: m.miss_ratio(),
            drop_ratio: m.drop_ratio(),
            avg_delay_ms: m.avg_delay_us() / 1000.0,
            max_delay_ms: m.max_delay_us as f64 / 1000.0,
            avg_hops: m.avg_hops(),
        }
    }

    /// Rows for a finished run: one per level for two-level traffic,
    /// otherwise a single level-0 row.
    pub fn for_run(label: &RunLabel, fin: &Finalized, two_level: bool) -> Vec<CsvRow> {
        if two_level {
            [1u8, 2]
                .iter()
                .map(|l| CsvRow::new(label, *l, fin.per_level.get(l).unwrap_or(&RunMetrics::default())))
                .collect()
        } else {
            vec![CsvRow::new(label, 0, &fin.total)]
        }
    }
}
