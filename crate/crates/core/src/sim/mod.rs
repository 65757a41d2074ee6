//! Event engine, virtual clock and the seeded random stream.

mod engine;
mod rng;
mod time;

pub use engine::{EventHandle, EventQueue, RunSummary, Scheduled};
pub use rng::SimRng;
pub use time::{secs_to_micros, SimTime};
