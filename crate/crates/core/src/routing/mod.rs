//! Shortest-path and greedy geographic routing toward the sink, and the
//! distance quantities the schedulers consume.

mod distance;
mod geographic;
mod geometry;
mod router;
mod shortest_path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::{eetd, hop_equivalents, DistanceInfo, DistanceMode};
pub use geographic::{gf_next_hop, progress};
pub use geometry::Point;
pub use router::Router;
pub use shortest_path::{SpEntry, SpTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMode {
    /// Minimum hop count from periodic sink floods.
    Sp,
    /// Greedy forwarding to the neighbor closest to the sink.
    Gf,
    /// SPEED relay-speed forwarding.
    Speed,
}

impl RoutingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RoutingMode::Sp => "sp",
            RoutingMode::Gf => "gf",
            RoutingMode::Speed => "speed",
        }
    }
}

/// How greedy forwarding measures "one hop" when converting meters to hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneHopRule {
    /// Progress toward the sink made by the chosen next hop.
    Progress,
    /// The nominal transmission range.
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("greedy forwarding void: no neighbor closer to the sink")]
    GfVoid,
    #[error("no route to the sink")]
    NoRoute,
}

/// Distance-to-sink in the routing protocol's own metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Hops(u32),
    Meters(f64),
}

impl Metric {
    pub fn value(self) -> f64 {
        match self {
            Metric::Hops(h) => h as f64,
            Metric::Meters(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteEntry {
    pub next_hop: crate::NodeId,
    pub metric: Metric,
    pub advert_seq: Option<u64>,
}
