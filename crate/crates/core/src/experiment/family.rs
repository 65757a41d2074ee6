use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OneOrMany, Series};
use crate::routing::RoutingMode;
use crate::rtsched::Policy;
use crate::scenarios::{TopologyKind, TrafficPattern};
use crate::SimError;

/// SPEED setpoint used by the SPEED comparisons: about half the relay speed
/// of a one-spacing grid hop (111 m) over an uncontended exchange (~1.1 ms).
pub const SPEED_FAMILY_SETPOINT_MPS: f64 = 50_000.0;

/// Preset experiment families, one per evaluation figure group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    JitsVsVms,
    SpVsGf,
    Bursty,
    RandomDeploy,
    TwoLevel,
    SpeedRouting,
    JitsVsSpeed,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::JitsVsVms,
        Family::SpVsGf,
        Family::Bursty,
        Family::RandomDeploy,
        Family::TwoLevel,
        Family::SpeedRouting,
        Family::JitsVsSpeed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::JitsVsVms => "jits_vs_vms",
            Family::SpVsGf => "sp_vs_gf",
            Family::Bursty => "bursty",
            Family::RandomDeploy => "random_deploy",
            Family::TwoLevel => "two_level",
            Family::SpeedRouting => "speed_routing",
            Family::JitsVsSpeed => "jits_vs_speed",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Family::JitsVsVms => "grid, GF: JiTS-S/D against static and dynamic VMS, deadlines 0.5-2.0 s",
            Family::SpVsGf => "grid: JiTS-S/D/NL over SP and GF, deadlines 0.25-3.0 s",
            Family::Bursty => "grid, GF, 10 s period / 5 s on gate: JiTS-S/D against VMS-S, deadlines 0.1-3.0 s",
            Family::RandomDeploy => "random deployment, sink at center, GF: deadlines 0.5-2.0 s step 0.1",
            Family::TwoLevel => "grid, GF, bursty two-deadline traffic: JiTS-D against VMS-S",
            Family::SpeedRouting => "grid with congestion flows: SPEED, GF and SP under FIFO",
            Family::JitsVsSpeed => "grid, loads I-III: JiTS-D over SP against SPEED",
        }
    }

    /// The preset configuration of this family.
    pub fn preset(self) -> ExperimentConfig {
        use Policy::*;
        use RoutingMode::*;
        let base = ExperimentConfig {
            family: Some(self),
            ..ExperimentConfig::default()
        };
        match self {
            Family::JitsVsVms => ExperimentConfig {
                routing: OneOrMany::one(Gf),
                policy: vec![JitsS, JitsD, VmsS, VmsD].into(),
                deadline_sweep: Some([0.5, 2.0, 0.5]),
                ..base
            },
            Family::SpVsGf => ExperimentConfig {
                routing: vec![Sp, Gf].into(),
                policy: vec![JitsS, JitsD, JitsNl].into(),
                deadline_sweep: Some([0.25, 3.0, 0.25]),
                ..base
            },
            Family::Bursty => ExperimentConfig {
                routing: OneOrMany::one(Gf),
                policy: vec![JitsS, JitsD, VmsS].into(),
                traffic: OneOrMany::one(TrafficPattern::Bursty),
                deadline_sweep: Some([0.1, 3.0, 0.1]),
                ..base
            },
            Family::RandomDeploy => ExperimentConfig {
                topology: TopologyKind::Random,
                routing: OneOrMany::one(Gf),
                policy: vec![JitsS, JitsD, VmsS].into(),
                deadline_sweep: Some([0.5, 2.0, 0.1]),
                ..base
            },
            Family::TwoLevel => ExperimentConfig {
                routing: OneOrMany::one(Gf),
                policy: vec![JitsD, VmsS].into(),
                traffic: OneOrMany::one(TrafficPattern::TwoLevel),
                deadline_sweep: Some([0.5, 3.0, 0.5]),
                ..base
            },
            Family::SpeedRouting => ExperimentConfig {
                series: vec![Series::new(Fifo, Speed), Series::new(Fifo, Gf), Series::new(Fifo, Sp)],
                traffic: OneOrMany::one(TrafficPattern::CongestionFlows),
                deadline_sweep: Some([0.5, 3.0, 0.5]),
                speed_setpoint_mps: SPEED_FAMILY_SETPOINT_MPS,
                ..base
            },
            Family::JitsVsSpeed => ExperimentConfig {
                series: vec![Series::new(JitsD, Sp), Series::new(Fifo, Speed)],
                traffic: vec![TrafficPattern::LoadI, TrafficPattern::LoadIi, TrafficPattern::LoadIii].into(),
                deadline_sweep: Some([0.5, 3.0, 0.5]),
                speed_setpoint_mps: SPEED_FAMILY_SETPOINT_MPS,
                ..base
            },
        }
    }
}

impl std::str::FromStr for Family {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| SimError::InvalidConfig(format!("unknown family {s:?}")))
    }
}
