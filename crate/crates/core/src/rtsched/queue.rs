use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use super::Packet;
use crate::sim::SimTime;

/// A packet waiting for its target transmission time.
#[derive(Debug, Clone)]
pub struct QueuedPacket {
    pub packet: Packet,
    pub target_tx_at: SimTime,
    pub enqueued_at: SimTime,
    seq: u64,
}

impl QueuedPacket {
    fn key(&self) -> (SimTime, u64) {
        (self.target_tx_at, self.seq)
    }
}

impl PartialEq for QueuedPacket {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for QueuedPacket {}

impl PartialOrd for QueuedPacket {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueuedPacket {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Single priority queue keyed by target transmission time; ties resolve in
/// arrival order. The queue never drops: inserting into a full queue first
/// evicts the head, which the caller must forward immediately.
#[derive(Debug)]
pub struct JitsQueue {
    heap: BinaryHeap<Reverse<QueuedPacket>>,
    capacity: usize,
    next_seq: u64,
}

impl JitsQueue {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "queue capacity must be at least one");
        JitsQueue {
            heap: BinaryHeap::with_capacity(capacity),
            capacity,
            next_seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Inserts `packet` due at `now + delay_us`. Returns the evicted head
    /// when the queue was full.
    pub fn push(&mut self, packet: Packet, now: SimTime, delay_us: u64) -> Option<QueuedPacket> {
        let evicted = if self.heap.len() >= self.capacity {
            self.pop()
        } else {
            None
        };
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(QueuedPacket {
            packet,
            target_tx_at: now + delay_us,
            enqueued_at: now,
            seq,
        }));
        evicted
    }

    /// Earliest target transmission time in the queue.
    pub fn head_target(&self) -> Option<SimTime> {
        self.heap.peek().map(|r| r.0.target_tx_at)
    }

    pub fn pop(&mut self) -> Option<QueuedPacket> {
        self.heap.pop().map(|r| r.0)
    }

    /// Removes the head if its target time has been reached.
    pub fn pop_due(&mut self, now: SimTime) -> Option<QueuedPacket> {
        match self.head_target() {
            Some(t) if t <= now => self.pop(),
            _ => None,
        }
    }
}

/// Bounded first-in first-out queue with drop-tail overflow.
#[derive(Debug)]
pub struct FifoQueue<T> {
    items: VecDeque<T>,
    capacity: usize,
}

impl<T> FifoQueue<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "queue capacity must be at least one");
        FifoQueue {
            items: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    /// Appends `item`, handing it back if the queue is full.
    pub fn push(&mut self, item: T) -> Result<(), T> {
        if self.items.len() >= self.capacity {
            return Err(item);
        }
        self.items.push_back(item);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<T> {
        self.items.pop_front()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}
