use crate::sim::SimTime;
use crate::NodeId;

pub type PacketId = u64;

/// A sensed datum travelling toward the sink.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: PacketId,
    pub source: NodeId,
    pub sink: NodeId,
    pub created_at: SimTime,
    /// End-to-end deadline relative to creation, microseconds.
    pub deadline_rel_us: u64,
    /// Deadline class; 0 for single-level traffic.
    pub level: u8,
    pub hops: u32,
    /// Source-to-sink distance in the routing metric, fixed at creation.
    pub source_e2e: f64,
    /// One-hop length at the source, fixed at creation.
    pub source_one_hop: f64,
    /// Class assigned once at the source by static velocity scheduling.
    pub vms_class: Option<u8>,
    /// When the packet reached its current node.
    pub arrived_at: SimTime,
    /// Neighbor selected at the current node.
    pub next_hop: Option<NodeId>,
}

impl Packet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: PacketId,
        source: NodeId,
        sink: NodeId,
        created_at: SimTime,
        deadline_rel_us: u64,
        level: u8,
        source_e2e: f64,
        source_one_hop: f64,
    ) -> Self {
        assert!(deadline_rel_us > 0, "relative deadline must be positive");
        Packet {
            id,
            source,
            sink,
            created_at,
            deadline_rel_us,
            level,
            hops: 0,
            source_e2e,
            source_one_hop,
            vms_class: None,
            arrived_at: created_at,
            next_hop: None,
        }
    }

    pub fn deadline_abs(&self) -> SimTime {
        self.created_at + self.deadline_rel_us
    }

    /// Time left until the absolute deadline; negative once it has passed.
    pub fn remaining_slack_us(&self, now: SimTime) -> i64 {
        self.deadline_abs() - now
    }
}
