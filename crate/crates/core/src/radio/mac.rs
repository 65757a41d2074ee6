//! Reduced 802.11 DCF.
//!
//! Each node holds at most one frame in service. Access follows the basic
//! DCF rules: a frame that finds the medium idle for at least DIFS (and no
//! back-off pending) is sent at once; otherwise the node waits for DIFS of
//! idle medium and counts down a uniform back-off in `[0, CW)` slots,
//! freezing the count whenever the medium turns busy. Carrier sense and
//! interference share one range. A unicast exchange occupies the medium for
//! data + SIFS + ACK and succeeds iff no overlapping transmission originates
//! within interference range of the receiver (the receiver's own
//! transmissions included). Failures double the window up to `cw_max`;
//! after `retry_limit` failed attempts the frame is dropped. Every completed
//! transmission is followed by a post-back-off drawn from `cw_min`.

use std::sync::Arc;

use super::{RadioConfig, RadioGraph};
use crate::error::SimError;
use crate::sim::{EventHandle, EventQueue, SimRng, SimTime};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Destination {
    Unicast(NodeId),
    Broadcast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame<P> {
    pub src: NodeId,
    pub dst: Destination,
    pub size_bytes: u32,
    /// Priority class for prioritized back-off; 0 is the most aggressive.
    pub mac_priority: Option<u8>,
    pub payload: P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MacEvent {
    DifsDone(NodeId),
    BackoffDone(NodeId),
    TxEnd(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MacDrop {
    /// Unicast destination outside transmission range.
    NoLink,
    /// `retry_limit` consecutive failed attempts.
    RetryLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MacOutcome {
    Delivered,
    Dropped(MacDrop),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MacNotice<P> {
    /// The frame in service at `node` finished; the MAC is free again.
    Completed {
        node: NodeId,
        frame: Frame<P>,
        outcome: MacOutcome,
        accepted_at: SimTime,
        attempts: u32,
    },
    /// `node` decoded a frame sent by `from`.
    Received { node: NodeId, from: NodeId, payload: P },
    /// The medium around `node` just became idle (only when idle reporting is on).
    MediumIdle { node: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Deferred {
        remaining: u64,
    },
    Difs {
        remaining: u64,
        until: SimTime,
        handle: EventHandle,
    },
    Backoff {
        remaining: u64,
        start: SimTime,
        until: SimTime,
        handle: EventHandle,
    },
    Transmitting,
}

#[derive(Debug, Clone)]
struct Job<P> {
    frame: Frame<P>,
    accepted_at: SimTime,
    attempts: u32,
    cw: u32,
}

#[derive(Debug, Clone)]
struct NodeMac<P> {
    job: Option<Job<P>>,
    phase: Phase,
    busy: u32,
    idle_since: SimTime,
    /// Transmissions sensed that started at `fresh_at`; a node cannot sense
    /// a transmission beginning in its own slot.
    fresh: u32,
    fresh_at: SimTime,
}

impl<P> NodeMac<P> {
    fn busy_at(&self, now: SimTime) -> u32 {
        if self.fresh_at == now {
            self.busy - self.fresh
        } else {
            self.busy
        }
    }
}

#[derive(Debug, Clone)]
struct ActiveTx {
    id: u64,
    src: NodeId,
    dst: Destination,
    overlappers: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MacStats {
    pub transmissions: u64,
    pub failed_attempts: u64,
    pub retry_drops: u64,
}

/// Shared-medium state for every node of a run.
pub struct Radio<P> {
    cfg: RadioConfig,
    graph: Arc<RadioGraph>,
    macs: Vec<NodeMac<P>>,
    active: Vec<ActiveTx>,
    next_tx: u64,
    report_idle: bool,
    stats: MacStats,
}

impl<P: Clone> Radio<P> {
    pub fn new(cfg: RadioConfig, graph: Arc<RadioGraph>) -> Self {
        let macs = (0..graph.len())
            .map(|_| NodeMac {
                job: None,
                phase: Phase::Idle,
                busy: 0,
                idle_since: SimTime::ZERO,
                fresh: 0,
                fresh_at: SimTime::MAX,
            })
            .collect();
        Radio {
            cfg,
            graph,
            macs,
            active: Vec::new(),
            next_tx: 0,
            report_idle: false,
            stats: MacStats::default(),
        }
    }

    /// Emit [`MacNotice::MediumIdle`] on every busy-to-idle transition.
    pub fn set_report_idle(&mut self, on: bool) {
        self.report_idle = on;
    }

    pub fn config(&self) -> &RadioConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &RadioGraph {
        &self.graph
    }

    pub fn stats(&self) -> MacStats {
        self.stats
    }

    /// True when the node can accept a new frame.
    pub fn is_free(&self, node: NodeId) -> bool {
        self.macs[node].job.is_none()
    }

    /// Start of the current idle period as sensed by `node`, if idle.
    pub fn idle_since(&self, node: NodeId) -> Option<SimTime> {
        let m = &self.macs[node];
        (m.busy == 0).then_some(m.idle_since)
    }

    /// Hands a frame to the MAC using the default contention window.
    pub fn mac_send<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        rng: &mut SimRng,
        frame: Frame<P>,
        out: &mut Vec<MacNotice<P>>,
    ) -> Result<(), SimError> {
        let frame = Frame {
            mac_priority: None,
            ..frame
        };
        self.enqueue(q, rng, frame, out)
    }

    /// Hands a frame to the MAC with the initial window scaled by its class.
    pub fn mac_send_prioritized<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        rng: &mut SimRng,
        frame: Frame<P>,
        out: &mut Vec<MacNotice<P>>,
    ) -> Result<(), SimError> {
        match frame.mac_priority {
            Some(c) if c <= 2 => self.enqueue(q, rng, frame, out),
            Some(c) => Err(SimError::InvalidPriority(c)),
            None => Err(SimError::InvalidConfig(
                "prioritized send without a priority class".into(),
            )),
        }
    }

    fn enqueue<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        rng: &mut SimRng,
        frame: Frame<P>,
        out: &mut Vec<MacNotice<P>>,
    ) -> Result<(), SimError> {
        let src = frame.src;
        if !self.is_free(src) {
            return Err(SimError::MacBusy(src));
        }
        if let Some(c) = frame.mac_priority {
            if c > 2 {
                return Err(SimError::InvalidPriority(c));
            }
        }
        let now = q.now();
        if let Destination::Unicast(dst) = frame.dst {
            if !self.graph.in_range(src, dst) {
                out.push(MacNotice::Completed {
                    node: src,
                    frame,
                    outcome: MacOutcome::Dropped(MacDrop::NoLink),
                    accepted_at: now,
                    attempts: 0,
                });
                return Ok(());
            }
        }
        let cw = self.cfg.cw_for_class(frame.mac_priority);
        self.macs[src].job = Some(Job {
            frame,
            accepted_at: now,
            attempts: 0,
            cw,
        });
        let m = &self.macs[src];
        if m.phase == Phase::Idle {
            if m.busy_at(now) == 0 && now >= m.idle_since + self.cfg.difs_us {
                self.transmit(q, src);
            } else {
                let remaining = rng.below(cw as u64);
                self.macs[src].phase = Phase::Deferred { remaining };
                self.resume(q, src);
            }
        }
        Ok(())
    }

    pub fn handle<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        rng: &mut SimRng,
        ev: MacEvent,
        out: &mut Vec<MacNotice<P>>,
    ) {
        match ev {
            MacEvent::DifsDone(n) => {
                if let Phase::Difs { remaining, .. } = self.macs[n].phase {
                    if self.macs[n].busy > 0 {
                        self.macs[n].phase = Phase::Deferred { remaining };
                    } else if remaining == 0 {
                        self.finish_countdown(q, n);
                    } else {
                        let now = q.now();
                        let until = now + remaining * self.cfg.slot_us;
                        let handle = q.schedule_in(until.since(now), MacEvent::BackoffDone(n).into());
                        self.macs[n].phase = Phase::Backoff {
                            remaining,
                            start: now,
                            until,
                            handle,
                        };
                    }
                }
            }
            MacEvent::BackoffDone(n) => {
                if matches!(self.macs[n].phase, Phase::Backoff { .. }) {
                    self.finish_countdown(q, n);
                }
            }
            MacEvent::TxEnd(id) => self.tx_end(q, rng, id, out),
        }
    }

    fn finish_countdown<E: From<MacEvent>>(&mut self, q: &mut EventQueue<E>, n: NodeId) {
        if self.macs[n].job.is_some() {
            self.transmit(q, n);
        } else {
            self.macs[n].phase = Phase::Idle;
        }
    }

    fn transmit<E: From<MacEvent>>(&mut self, q: &mut EventQueue<E>, src: NodeId) {
        let job = self.macs[src].job.as_ref().expect("transmit without a frame");
        let duration = match job.frame.dst {
            Destination::Unicast(_) => self.cfg.unicast_exchange_us(job.frame.size_bytes),
            Destination::Broadcast => self.cfg.frame_airtime_us(job.frame.size_bytes),
        };
        let dst = job.frame.dst;
        let id = self.next_tx;
        self.next_tx += 1;
        let mut overlappers = Vec::with_capacity(self.active.len());
        for a in &mut self.active {
            a.overlappers.push(src);
            overlappers.push(a.src);
        }
        self.active.push(ActiveTx {
            id,
            src,
            dst,
            overlappers,
        });
        self.macs[src].phase = Phase::Transmitting;
        self.stats.transmissions += 1;
        let graph = Arc::clone(&self.graph);
        self.mark_busy(q, src);
        for &n in graph.sensing(src) {
            self.mark_busy(q, n);
        }
        q.schedule_in(duration, MacEvent::TxEnd(id).into());
    }

    fn mark_busy<E: From<MacEvent>>(&mut self, q: &mut EventQueue<E>, n: NodeId) {
        let now = q.now();
        let slot = self.cfg.slot_us;
        let m = &mut self.macs[n];
        if m.fresh_at != now {
            m.fresh_at = now;
            m.fresh = 0;
        }
        m.fresh += 1;
        m.busy += 1;
        if m.busy != 1 {
            return;
        }
        // A countdown expiring in this very instant is not interrupted: the
        // node cannot sense a transmission that starts in its own slot.
        match m.phase {
            Phase::Difs {
                remaining,
                until,
                handle,
            } if until > now => {
                q.cancel(handle);
                m.phase = Phase::Deferred { remaining };
            }
            Phase::Backoff {
                remaining,
                start,
                until,
                handle,
            } if until > now => {
                q.cancel(handle);
                let elapsed = now.since(start) / slot;
                m.phase = Phase::Deferred {
                    remaining: remaining - elapsed,
                };
            }
            _ => {}
        }
    }

    fn mark_idle<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        n: NodeId,
        out: &mut Vec<MacNotice<P>>,
    ) {
        let m = &mut self.macs[n];
        m.busy -= 1;
        if m.busy == 0 {
            m.idle_since = q.now();
            self.resume(q, n);
            if self.report_idle {
                out.push(MacNotice::MediumIdle { node: n });
            }
        }
    }

    fn resume<E: From<MacEvent>>(&mut self, q: &mut EventQueue<E>, n: NodeId) {
        let m = &self.macs[n];
        if let Phase::Deferred { remaining } = m.phase {
            if m.busy == 0 {
                let now = q.now();
                let until = (m.idle_since + self.cfg.difs_us).max(now);
                let handle = q
                    .schedule(until, MacEvent::DifsDone(n).into())
                    .expect("DIFS end is never in the past");
                self.macs[n].phase = Phase::Difs {
                    remaining,
                    until,
                    handle,
                };
            }
        }
    }

    fn post_backoff<E: From<MacEvent>>(&mut self, q: &mut EventQueue<E>, rng: &mut SimRng, n: NodeId) {
        let remaining = rng.below(self.cfg.cw_min as u64);
        self.macs[n].phase = Phase::Deferred { remaining };
        self.resume(q, n);
    }

    fn tx_end<E: From<MacEvent>>(
        &mut self,
        q: &mut EventQueue<E>,
        rng: &mut SimRng,
        id: u64,
        out: &mut Vec<MacNotice<P>>,
    ) {
        let idx = self
            .active
            .iter()
            .position(|a| a.id == id)
            .expect("TxEnd for unknown transmission");
        let tx = self.active.remove(idx);
        let graph = Arc::clone(&self.graph);
        self.mark_idle(q, tx.src, out);
        for &n in graph.sensing(tx.src) {
            self.mark_idle(q, n, out);
        }

        let clean_at = |rx: NodeId| !tx.overlappers.iter().any(|&o| graph.interferes(o, rx));
        let mut job = self.macs[tx.src].job.take().expect("transmitting node has a frame");
        job.attempts += 1;
        match tx.dst {
            Destination::Broadcast => {
                for &(rx, _) in graph.neighbors(tx.src) {
                    if clean_at(rx) {
                        out.push(MacNotice::Received {
                            node: rx,
                            from: tx.src,
                            payload: job.frame.payload.clone(),
                        });
                    }
                }
                self.complete(job, MacOutcome::Delivered, out);
                self.post_backoff(q, rng, tx.src);
            }
            Destination::Unicast(rx) => {
                if clean_at(rx) {
                    out.push(MacNotice::Received {
                        node: rx,
                        from: tx.src,
                        payload: job.frame.payload.clone(),
                    });
                    self.complete(job, MacOutcome::Delivered, out);
                    self.post_backoff(q, rng, tx.src);
                } else {
                    self.stats.failed_attempts += 1;
                    if job.attempts >= self.cfg.retry_limit {
                        self.stats.retry_drops += 1;
                        self.complete(job, MacOutcome::Dropped(MacDrop::RetryLimit), out);
                        self.post_backoff(q, rng, tx.src);
                    } else {
                        job.cw = (2 * job.cw + 1).min(self.cfg.cw_max);
                        let remaining = rng.below(job.cw as u64);
                        self.macs[tx.src].job = Some(job);
                        self.macs[tx.src].phase = Phase::Deferred { remaining };
                        self.resume(q, tx.src);
                    }
                }
            }
        }
    }

    fn complete(&mut self, job: Job<P>, outcome: MacOutcome, out: &mut Vec<MacNotice<P>>) {
        out.push(MacNotice::Completed {
            node: job.frame.src,
            frame: job.frame,
            outcome,
            accepted_at: job.accepted_at,
            attempts: job.attempts,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::Point;

    struct Bench {
        q: EventQueue<MacEvent>,
        rng: SimRng,
        radio: Radio<u32>,
    }

    impl Bench {
        fn new(points: &[(f64, f64)], seed: u64) -> Self {
            Self::with_config(points, seed, RadioConfig::default())
        }

        fn with_config(points: &[(f64, f64)], seed: u64, cfg: RadioConfig) -> Self {
            let pos = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
            let graph = Arc::new(RadioGraph::new(pos, cfg.tx_range_m, cfg.interference_range_m));
            Bench {
                q: EventQueue::new(),
                rng: SimRng::new(seed),
                radio: Radio::new(cfg, graph),
            }
        }

        fn send(&mut self, src: NodeId, dst: Destination, bytes: u32, class: Option<u8>) -> Vec<MacNotice<u32>> {
            let mut out = vec![];
            let frame = Frame {
                src,
                dst,
                size_bytes: bytes,
                mac_priority: class,
                payload: src as u32,
            };
            if class.is_some() {
                self.radio
                    .mac_send_prioritized(&mut self.q, &mut self.rng, frame, &mut out)
                    .unwrap();
            } else {
                self.radio.mac_send(&mut self.q, &mut self.rng, frame, &mut out).unwrap();
            }
            out
        }

        /// Processes everything due up to `t`, then moves the clock there.
        fn settle(&mut self, t: SimTime) {
            let mut out = vec![];
            while let Some(ev) = self.q.pop_until(t) {
                self.radio.handle(&mut self.q, &mut self.rng, ev.event, &mut out);
            }
            self.q.advance_to(t);
        }

        /// Runs until the next `Completed` notice and returns it with its time.
        fn next_completion(&mut self) -> Option<(SimTime, MacNotice<u32>)> {
            let mut out = vec![];
            while let Some(ev) = self.q.pop_until(SimTime::MAX) {
                self.radio.handle(&mut self.q, &mut self.rng, ev.event, &mut out);
                if let Some(i) = out.iter().position(|n| matches!(n, MacNotice::Completed { .. })) {
                    return Some((ev.fire_at, out.swap_remove(i)));
                }
            }
            None
        }
    }

    #[test]
    fn idle_channel_unicast_takes_one_exchange() {
        let mut b = Bench::new(&[(0.0, 0.0), (200.0, 0.0)], 1);
        b.q.advance_to(SimTime::from_millis(1));
        b.send(0, Destination::Unicast(1), 32, None);
        let (t, n) = b.next_completion().unwrap();
        let exchange = b.radio.config().unicast_exchange_us(32);
        assert_eq!(t, SimTime::from_millis(1) + exchange);
        assert!(t.since(SimTime::from_millis(1)) >= b.radio.config().frame_airtime_us(32));
        match n {
            MacNotice::Completed { outcome, attempts, .. } => {
                assert_eq!(outcome, MacOutcome::Delivered);
                assert_eq!(attempts, 1);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn out_of_range_unicast_is_dropped_immediately() {
        let mut b = Bench::new(&[(0.0, 0.0), (300.0, 0.0)], 1);
        let out = b.send(0, Destination::Unicast(1), 32, None);
        assert!(matches!(
            out[0],
            MacNotice::Completed {
                outcome: MacOutcome::Dropped(MacDrop::NoLink),
                ..
            }
        ));
        assert!(b.radio.is_free(0));
    }

    #[test]
    fn invalid_priority_rejected() {
        let mut b = Bench::new(&[(0.0, 0.0), (100.0, 0.0)], 1);
        let frame = Frame {
            src: 0,
            dst: Destination::Unicast(1),
            size_bytes: 32,
            mac_priority: Some(3),
            payload: 0,
        };
        let mut out = vec![];
        let err = b.radio.mac_send_prioritized(&mut b.q, &mut b.rng, frame, &mut out);
        assert_eq!(err, Err(SimError::InvalidPriority(3)));
    }

    #[test]
    fn busy_mac_rejects_second_frame() {
        let mut b = Bench::new(&[(0.0, 0.0), (100.0, 0.0)], 1);
        b.send(0, Destination::Unicast(1), 32, None);
        let frame = Frame {
            src: 0,
            dst: Destination::Unicast(1),
            size_bytes: 32,
            mac_priority: None,
            payload: 0,
        };
        let mut out = vec![];
        assert_eq!(
            b.radio.mac_send(&mut b.q, &mut b.rng, frame, &mut out),
            Err(SimError::MacBusy(0))
        );
    }

    #[test]
    fn simultaneous_senders_collide_and_back_off() {
        // 0 and 2 both reach receiver 1 and start in the same instant.
        let mut b = Bench::new(&[(0.0, 0.0), (200.0, 0.0), (400.0, 0.0)], 3);
        b.q.advance_to(SimTime::from_millis(1));
        b.send(0, Destination::Unicast(1), 32, None);
        b.send(2, Destination::Unicast(1), 32, None);
        assert_eq!(b.radio.stats().transmissions, 2);
        let mut attempts = vec![];
        while let Some((_, n)) = b.next_completion() {
            if let MacNotice::Completed { attempts: a, outcome, .. } = n {
                assert_eq!(outcome, MacOutcome::Delivered);
                attempts.push(a);
            }
        }
        assert_eq!(attempts.len(), 2);
        assert!(attempts.iter().all(|&a| a >= 2), "{attempts:?}");
        assert!(b.radio.stats().failed_attempts >= 2);
    }

    #[test]
    fn hidden_jammer_exhausts_retries() {
        // Jammer 2 is outside sender 0's sensing range but interferes at receiver 1.
        let mut b = Bench::new(&[(0.0, 0.0), (240.0, 0.0), (790.0, 0.0)], 5);
        b.q.advance_to(SimTime::from_millis(1));
        b.send(2, Destination::Broadcast, 2_000, None);
        b.send(0, Destination::Unicast(1), 32, None);
        let mut out = vec![];
        let mut dropped = None;
        while let Some(ev) = b.q.pop_until(SimTime::from_secs(5)) {
            b.radio.handle(&mut b.q, &mut b.rng, ev.event, &mut out);
            for n in out.drain(..) {
                if let MacNotice::Completed { node, outcome, attempts, .. } = n {
                    if node == 2 {
                        let mut more = b.send(2, Destination::Broadcast, 2_000, None);
                        assert!(more.is_empty());
                        more.clear();
                    } else {
                        dropped = Some((outcome, attempts));
                    }
                }
            }
            if dropped.is_some() {
                break;
            }
        }
        let (outcome, attempts) = dropped.expect("sender finished");
        assert_eq!(outcome, MacOutcome::Dropped(MacDrop::RetryLimit));
        assert_eq!(attempts, RadioConfig::default().retry_limit);
    }

    #[test]
    fn uncontended_etd_converges_to_nominal() {
        use crate::radio::{update_etd, LinkEstimate};
        let mut b = Bench::new(&[(0.0, 0.0), (150.0, 0.0)], 9);
        let nominal = b.radio.config().nominal_etd_us() as f64;
        let mut link = LinkEstimate::new(1, 1.0_f64);
        for k in 1..=5u64 {
            b.settle(SimTime::from_millis(10 * k));
            b.send(0, Destination::Unicast(1), 32, None);
            let (t, n) = b.next_completion().unwrap();
            if let MacNotice::Completed { accepted_at, .. } = n {
                link = update_etd(link, t.since(accepted_at) as f64, 0.8).unwrap();
            }
        }
        assert!((link.etd - nominal).abs() <= 0.01 * nominal);
    }

    #[test]
    fn broadcast_reaches_every_neighbor() {
        let mut b = Bench::new(&[(0.0, 0.0), (100.0, 0.0), (0.0, 240.0), (600.0, 0.0)], 2);
        b.q.advance_to(SimTime::from_millis(1));
        b.send(0, Destination::Broadcast, 32, None);
        let mut out = vec![];
        while let Some(ev) = b.q.pop_until(SimTime::MAX) {
            b.radio.handle(&mut b.q, &mut b.rng, ev.event, &mut out);
        }
        let mut got: Vec<NodeId> = out
            .iter()
            .filter_map(|n| match n {
                MacNotice::Received { node, .. } => Some(*node),
                _ => None,
            })
            .collect();
        got.sort();
        assert_eq!(got, vec![1, 2]);
    }

    #[test]
    fn higher_class_wins_contention() {
        // 0: class 0 sender, 1: class 2 sender, 2: receiver, 3: jammer all sense.
        let mut rng_seed = 0;
        let trials = 10_000;
        let mut class0_first = 0;
        for _ in 0..trials {
            rng_seed += 1;
            let mut b = Bench::new(&[(0.0, 0.0), (0.0, 100.0), (100.0, 50.0), (50.0, 0.0)], rng_seed);
            b.q.advance_to(SimTime::from_millis(1));
            b.send(3, Destination::Broadcast, 32, None);
            b.settle(SimTime::from_micros(1_010));
            b.send(0, Destination::Unicast(2), 32, Some(0));
            b.send(1, Destination::Unicast(2), 32, Some(2));
            let mut first = None;
            while let Some((_, n)) = b.next_completion() {
                if let MacNotice::Completed { node, attempts, .. } = n {
                    if node != 3 && first.is_none() && attempts == 1 {
                        first = Some(node);
                    }
                }
            }
            if first == Some(0) {
                class0_first += 1;
            }
        }
        let rate = class0_first as f64 / trials as f64;
        assert!(rate > 0.5, "class-0 win rate {rate}");
    }

    #[test]
    fn single_contender_class_only_changes_window() {
        for class in [Some(0), Some(2), None] {
            let mut b = Bench::new(&[(0.0, 0.0), (100.0, 0.0)], 11);
            b.q.advance_to(SimTime::from_millis(1));
            b.send(0, Destination::Unicast(1), 32, class);
            let (_, n) = b.next_completion().unwrap();
            assert!(matches!(
                n,
                MacNotice::Completed {
                    outcome: MacOutcome::Delivered,
                    attempts: 1,
                    ..
                }
            ));
        }
    }
}
