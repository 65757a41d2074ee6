use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::routing::DistanceMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Fifo,
    /// Target delay fixed from the source's deadline and distance.
    JitsS,
    /// Target delay recomputed at every hop from the remaining slack.
    JitsD,
    /// Remaining slack halved per remaining hop, front-loading delay near the sink.
    JitsNl,
    VmsS,
    VmsD,
}

impl Policy {
    pub const ALL: [Policy; 6] = [
        Policy::Fifo,
        Policy::JitsS,
        Policy::JitsD,
        Policy::JitsNl,
        Policy::VmsS,
        Policy::VmsD,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Fifo => "fifo",
            Policy::JitsS => "jits_s",
            Policy::JitsD => "jits_d",
            Policy::JitsNl => "jits_nl",
            Policy::VmsS => "vms_s",
            Policy::VmsD => "vms_d",
        }
    }

    pub fn is_jits(self) -> bool {
        matches!(self, Policy::JitsS | Policy::JitsD | Policy::JitsNl)
    }

    pub fn is_vms(self) -> bool {
        matches!(self, Policy::VmsS | Policy::VmsD)
    }

    pub fn distance_mode(self) -> DistanceMode {
        match self {
            Policy::JitsS | Policy::VmsS => DistanceMode::AtSource,
            _ => DistanceMode::AtForwarder,
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| SimError::InvalidConfig(format!("unknown policy {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerConfig {
    pub policy: Policy,
    pub alpha: f64,
    pub queue_capacity: usize,
    pub idle_detection: bool,
    /// Velocity class boundaries (T1, T2) in m/s.
    pub vms_thresholds: (f64, f64),
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            policy: Policy::JitsD,
            alpha: 0.7,
            queue_capacity: 64,
            idle_detection: false,
            vms_thresholds: (500.0, 1500.0),
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(SimError::InvalidConfig("alpha must lie in (0, 1]".into()));
        }
        if self.queue_capacity < 1 {
            return Err(SimError::InvalidConfig("queue_capacity must be at least 1".into()));
        }
        let (t1, t2) = self.vms_thresholds;
        if !(t1 < t2) {
            return Err(SimError::InvalidConfig(
                "VMS velocity thresholds must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Capacity of each of the three VMS class queues.
    pub fn vms_class_capacity(&self) -> usize {
        (self.queue_capacity / 3).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.as_str().parse::<Policy>().unwrap(), p);
        }
        assert!("edf".parse::<Policy>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = SchedulerConfig::default();
        assert_eq!(c.alpha, 0.7);
        c.validate().unwrap();
        c.alpha = 0.0;
        assert!(c.validate().is_err());
        c.alpha = 1.0;
        c.vms_thresholds = (10.0, 10.0);
        assert!(c.validate().is_err());
        c.vms_thresholds = (1.0, 2.0);
        c.queue_capacity = 0;
        assert!(c.validate().is_err());
    }
}
