//! Network-layer packet scheduling: just-in-time target delays and their
//! priority queue, velocity monotonic classes with three FIFO queues, and
//! plain FIFO.

mod jits;
mod packet;
mod policy;
mod queue;
mod vms;

pub use jits::{allocate_slack, target_delay};
pub use packet::{Packet, PacketId};
pub use policy::{Policy, SchedulerConfig};
pub use queue::{FifoQueue, JitsQueue, QueuedPacket};
pub use vms::{velocity_mps, vms_priority, VmsQueues};
