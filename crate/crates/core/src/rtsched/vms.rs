use super::{FifoQueue, Packet};

/// Required velocity in m/s to cover `dist_m` within `slack_us`; infinite
/// when no slack is left.
pub fn velocity_mps(dist_m: f64, slack_us: i64) -> f64 {
    if slack_us <= 0 {
        return f64::INFINITY;
    }
    dist_m / (slack_us as f64 / 1e6)
}

/// Priority class for a required velocity: below `t1` is class 2, below
/// `t2` class 1, otherwise class 0 (most urgent). No slack maps to class 0.
pub fn vms_priority(dist_m: f64, slack_us: i64, thresholds: (f64, f64)) -> u8 {
    let v = velocity_mps(dist_m, slack_us);
    if v < thresholds.0 {
        2
    } else if v < thresholds.1 {
        1
    } else {
        0
    }
}

/// Three fixed-priority FIFO queues, class 0 served first.
#[derive(Debug)]
pub struct VmsQueues {
    classes: [FifoQueue<Packet>; 3],
}

impl VmsQueues {
    pub fn new(class_capacity: usize) -> Self {
        VmsQueues {
            classes: std::array::from_fn(|_| FifoQueue::new(class_capacity)),
        }
    }

    /// Appends to the FIFO of `class`; a full class hands the packet back.
    pub fn push(&mut self, class: u8, packet: Packet) -> Result<(), Packet> {
        self.classes[class.min(2) as usize].push(packet)
    }

    /// Next packet in fixed-priority order, with its class.
    pub fn pop(&mut self) -> Option<(u8, Packet)> {
        self.classes
            .iter_mut()
            .enumerate()
            .find_map(|(c, q)| q.pop().map(|p| (c as u8, p)))
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(FifoQueue::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
