use thiserror::Error;

use crate::sim::SimTime;

/// Precondition failures raised by the simulation primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("event scheduled in the past: fire_at {fire_at} < now {now}")]
    ScheduleInPast { fire_at: SimTime, now: SimTime },
    #[error("cannot draw from an empty range")]
    EmptyRange,
    #[error("delay sample must be positive, got {0}")]
    NonPositiveSample(f64),
    #[error("one-hop distance must be positive, got {0}")]
    ZeroOneHop(f64),
    #[error("MAC priority class {0} outside {{0,1,2}}")]
    InvalidPriority(u8),
    #[error("MAC at node {0} is already serving a frame")]
    MacBusy(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
