//! Deterministic discrete-event simulator for soft real-time data
//! dissemination in wireless sensor networks.
//!
//! The crate models a multi-hop sensor field (grid or random deployment)
//! delivering data to a single sink. Packets carry end-to-end deadlines and
//! are scheduled at every hop by one of several network-layer policies:
//!
//! * just-in-time scheduling, which deliberately holds each packet for a
//!   fraction of its remaining slack (`jits_s`, `jits_d`, `jits_nl`),
//! * velocity monotonic scheduling with three fixed-priority FIFO queues and
//!   a prioritized MAC back-off (`vms_s`, `vms_d`),
//! * plain FIFO, used together with the SPEED forwarding baseline.
//!
//! Routing is either shortest-path (hop count, built from periodic sink
//! floods), greedy geographic forwarding, or SPEED's relay-speed forwarding.
//! The radio is a reduced 802.11 DCF with carrier sense, binary-exponential
//! back-off and receiver-side collisions.
//!
//! The formula kernels (geometry, EWMA, delay allocation) are generic over
//! the floating-point scalar; the simulator itself is instantiated with the
//! aliases defined here.

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod network;
pub mod radio;
pub mod routing;
pub mod rtsched;
pub mod scalar;
pub mod scenarios;
pub mod sim;
pub mod speed;

pub use error::SimError;
pub use scalar::Scalar;

/// Scalar type used by the simulator.
pub type Real = f64;

/// Node identifier; nodes are numbered densely from zero.
pub type NodeId = usize;

pub type Position = routing::Point<Real>;
pub type DistanceInfo = routing::DistanceInfo<Real>;
pub type LinkEstimate = radio::LinkEstimate<Real>;
pub type Ewma = radio::Ewma<Real>;
