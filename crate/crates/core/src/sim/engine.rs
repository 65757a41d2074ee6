use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::SimTime;
use crate::error::SimError;

/// Handle returned by [`EventQueue::schedule`], usable for cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventHandle(u64);

impl EventHandle {
    pub fn seq(self) -> u64 {
        self.0
    }
}

/// An event popped from the queue.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheduled<E> {
    pub fire_at: SimTime,
    pub seq: u64,
    pub event: E,
}

struct Entry<E> {
    fire_at: SimTime,
    seq: u64,
    event: E,
}

impl<E> PartialEq for Entry<E> {
    fn eq(&self, other: &Self) -> bool {
        self.fire_at == other.fire_at && self.seq == other.seq
    }
}

impl<E> Eq for Entry<E> {}

impl<E> PartialOrd for Entry<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E> Ord for Entry<E> {
    // BinaryHeap is a max-heap; invert so the earliest (fire_at, seq) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .fire_at
            .cmp(&self.fire_at)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub events_processed: u64,
    pub end: SimTime,
}

/// Pending-event set ordered by `(fire_at, seq)` with the virtual clock.
pub struct EventQueue<E> {
    heap: BinaryHeap<Entry<E>>,
    live: HashSet<u64>,
    now: SimTime,
    next_seq: u64,
    processed: u64,
}

impl<E> Default for EventQueue<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventQueue<E> {
    pub fn new() -> Self {
        EventQueue {
            heap: BinaryHeap::new(),
            live: HashSet::new(),
            now: SimTime::ZERO,
            next_seq: 0,
            processed: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    /// Number of events processed so far.
    pub fn processed(&self) -> u64 {
        self.processed
    }

    /// Number of live (scheduled, not cancelled, not fired) events.
    pub fn pending(&self) -> usize {
        self.live.len()
    }

    pub fn schedule(&mut self, fire_at: SimTime, event: E) -> Result<EventHandle, SimError> {
        if fire_at < self.now {
            return Err(SimError::ScheduleInPast {
                fire_at,
                now: self.now,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.live.insert(seq);
        self.heap.push(Entry {
            fire_at,
            seq,
            event,
        });
        Ok(EventHandle(seq))
    }

    /// Schedules `delay_us` after the current clock; cannot fail.
    pub fn schedule_in(&mut self, delay_us: u64, event: E) -> EventHandle {
        self.schedule(self.now + delay_us, event)
            .expect("relative schedule is never in the past")
    }

    /// Removes a pending event. Returns true iff it had not fired yet.
    pub fn cancel(&mut self, handle: EventHandle) -> bool {
        self.live.remove(&handle.0)
    }

    pub fn is_pending(&self, handle: EventHandle) -> bool {
        self.live.contains(&handle.0)
    }

    /// Pops the next live event with `fire_at <= end`, advancing the clock to it.
    pub fn pop_until(&mut self, end: SimTime) -> Option<Scheduled<E>> {
        loop {
            let top = self.heap.peek()?;
            if top.fire_at > end {
                return None;
            }
            let entry = self.heap.pop().expect("peeked entry exists");
            if !self.live.remove(&entry.seq) {
                continue;
            }
            self.now = entry.fire_at;
            self.processed += 1;
            return Some(Scheduled {
                fire_at: entry.fire_at,
                seq: entry.seq,
                event: entry.event,
            });
        }
    }

    /// Moves the clock forward to `end` without processing anything.
    pub fn advance_to(&mut self, end: SimTime) {
        if end > self.now {
            self.now = end;
        }
    }

    /// Processes every event with `fire_at <= end` in order, then sets the clock to `end`.
    pub fn run_until<F>(&mut self, end: SimTime, mut handler: F) -> RunSummary
    where
        F: FnMut(&mut Self, Scheduled<E>),
    {
        let start = self.processed;
        while let Some(ev) = self.pop_until(end) {
            handler(self, ev);
        }
        self.advance_to(end);
        RunSummary {
            events_processed: self.processed - start,
            end: self.now,
        }
    }
}
