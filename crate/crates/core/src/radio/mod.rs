//! Radio propagation, the reduced 802.11 DCF contention model and the
//! one-hop transmission-delay estimate.

mod config;
mod etd;
mod graph;
mod mac;

pub use config::RadioConfig;
pub use etd::{update_etd, Ewma, LinkEstimate};
pub use graph::{neighbors_of, RadioGraph};
pub use mac::{Destination, Frame, MacDrop, MacEvent, MacNotice, MacOutcome, MacStats, Radio};
