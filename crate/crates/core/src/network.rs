//! One simulation run: a sensor field, its radios, routing and per-node
//! schedulers driven by the event engine.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use log::debug;

use crate::error::SimError;
use crate::metrics::{DropCause, FateLog, Finalized};
use crate::radio::{Destination, Frame, MacEvent, MacNotice, MacOutcome, MacStats, Radio, RadioConfig, RadioGraph};
use crate::routing::{OneHopRule, RouteError, Router, RoutingMode};
use crate::rtsched::{target_delay, vms_priority, FifoQueue, JitsQueue, Packet, Policy, SchedulerConfig, VmsQueues};
use crate::scenarios::{build_topology, generate_traffic, Emission, Topology, TopologySpec, TrafficSpec};
use crate::sim::{secs_to_micros, EventHandle, EventQueue, RunSummary, SimRng, SimTime};
use crate::speed::{SpeedConfig, SpeedDrop, SpeedTable};
use crate::{Ewma, NodeId};

/// Upper bound of the random delay before re-broadcasting an advertisement.
const REBROADCAST_JITTER_US: u64 = 50_000;

/// Everything that defines a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub topology: TopologySpec,
    pub radio: RadioConfig,
    pub routing: RoutingMode,
    pub gf_one_hop: OneHopRule,
    pub routing_period_s: f64,
    pub sched: SchedulerConfig,
    pub speed: SpeedConfig,
    pub traffic: TrafficSpec,
    pub drain_s: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            seed: 1,
            topology: TopologySpec::default(),
            radio: RadioConfig::default(),
            routing: RoutingMode::Sp,
            gf_one_hop: OneHopRule::Progress,
            routing_period_s: 5.0,
            sched: SchedulerConfig::default(),
            speed: SpeedConfig::default(),
            traffic: TrafficSpec::default(),
            drain_s: 10.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.radio.validate()?;
        self.sched.validate()?;
        self.speed.validate()?;
        if !(self.routing_period_s > 0.0) {
            return Err(SimError::InvalidConfig("routing_period_s must be positive".into()));
        }
        if !(self.drain_s >= 0.0) {
            return Err(SimError::InvalidConfig("drain_s must not be negative".into()));
        }
        Ok(())
    }

    /// Scenario label used in result tables, e.g. `grid-constant`.
    pub fn scenario(&self) -> String {
        format!("{}-{}", self.topology.kind.as_str(), self.traffic.pattern.as_str())
    }

    /// Routing label used in result tables; SPEED reports its variant.
    pub fn routing_label(&self) -> &'static str {
        match self.routing {
            RoutingMode::Speed => self.speed.variant.as_str(),
            m => m.as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ev {
    Mac(MacEvent),
    Emit,
    Timer(NodeId),
    Flood,
    Rebroadcast(NodeId),
    Beacon(NodeId),
    IdleCheck(NodeId),
}

impl From<MacEvent> for Ev {
    fn from(e: MacEvent) -> Self {
        Ev::Mac(e)
    }
}

#[derive(Debug, Clone)]
enum Payload {
    Data(Box<Packet>),
    Advert { seq: u64, hops: u32 },
    Beacon,
}

#[derive(Debug)]
enum Sched {
    Jits(JitsQueue),
    Vms(VmsQueues),
    Fifo(FifoQueue<Packet>),
}

#[derive(Debug)]
struct Node {
    sched: Sched,
    /// Packets forced out of a full queue, waiting for the MAC.
    backlog: VecDeque<Packet>,
    control: VecDeque<Payload>,
    timer: Option<(SimTime, EventHandle)>,
    idle_check: Option<EventHandle>,
    etd: BTreeMap<NodeId, Ewma>,
    speed: Option<SpeedTable>,
    rebroadcast_pending: bool,
}

/// Scheduler bookkeeping over a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueueStats {
    pub jits_enqueued: u64,
    pub jits_dispatched: u64,
    pub jits_evictions: u64,
    pub idle_dispatches: u64,
    pub max_queue_len: usize,
    /// Packets still queued when the run ended, backlogs included.
    pub left_in_queues: u64,
    /// Packets still held in JiTS target-time queues when the run ended.
    pub left_in_jits: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metrics: Finalized,
    pub summary: RunSummary,
    pub mac: MacStats,
    pub queues: QueueStats,
}

pub struct Simulation {
    cfg: SimConfig,
    q: EventQueue<Ev>,
    rng: SimRng,
    radio: Radio<Payload>,
    router: Router,
    nodes: Vec<Node>,
    sink: NodeId,
    emissions: Vec<Emission>,
    cursor: usize,
    log: FateLog,
    flood_seq: u64,
    notices: Vec<MacNotice<Payload>>,
    end: SimTime,
    nominal_etd_us: f64,
    idle_threshold_us: u64,
    stats: QueueStats,
    started: bool,
    processed: u64,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> Result<Self, SimError> {
        cfg.validate()?;
        let topo = build_topology(&cfg.topology)?;
        Self::with_topology(cfg, topo)
    }

    /// Builds a run over an explicit deployment.
    pub fn with_topology(cfg: SimConfig, topo: Topology) -> Result<Self, SimError> {
        cfg.validate()?;
        let mut rng = SimRng::new(cfg.seed);
        let emissions = generate_traffic(&cfg.traffic, &topo, &mut rng)?;
        let graph = Arc::new(RadioGraph::new(
            topo.positions.clone(),
            cfg.radio.tx_range_m,
            cfg.radio.interference_range_m,
        ));
        let mut radio = Radio::new(cfg.radio.clone(), Arc::clone(&graph));
        let jits_idle = cfg.sched.policy.is_jits() && cfg.sched.idle_detection;
        radio.set_report_idle(jits_idle);
        let router = Router::new(cfg.routing, Arc::clone(&graph), topo.sink, cfg.radio.tx_range_m, cfg.gf_one_hop);
        let nominal = cfg.radio.nominal_etd_us() as f64;
        let nodes = (0..graph.len())
            .map(|n| Node {
                sched: match cfg.sched.policy {
                    p if p.is_jits() => Sched::Jits(JitsQueue::new(cfg.sched.queue_capacity)),
                    p if p.is_vms() => Sched::Vms(VmsQueues::new(cfg.sched.vms_class_capacity())),
                    _ => Sched::Fifo(FifoQueue::new(cfg.sched.queue_capacity)),
                },
                backlog: VecDeque::new(),
                control: VecDeque::new(),
                timer: None,
                idle_check: None,
                etd: BTreeMap::new(),
                speed: (cfg.routing == RoutingMode::Speed)
                    .then(|| SpeedTable::new(graph.position(n), cfg.radio.etd_beta, nominal)),
                rebroadcast_pending: false,
            })
            .collect();
        let gen_end = SimTime::from_micros(secs_to_micros(cfg.traffic.generation_s));
        let end = gen_end + secs_to_micros(cfg.drain_s);
        let idle_threshold_us = 2 * cfg.radio.nominal_etd_us();
        Ok(Simulation {
            q: EventQueue::new(),
            rng,
            radio,
            router,
            nodes,
            sink: topo.sink,
            emissions,
            cursor: 0,
            log: FateLog::new(),
            flood_seq: 0,
            notices: Vec::new(),
            end,
            nominal_etd_us: nominal,
            idle_threshold_us,
            stats: QueueStats::default(),
            started: false,
            processed: 0,
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Number of packets the traffic schedule will generate.
    pub fn scheduled_emissions(&self) -> usize {
        self.emissions.len()
    }

    pub fn router(&self) -> &Router {
        &self.router
    }

    pub fn now(&self) -> SimTime {
        self.q.now()
    }

    /// Processes every event due up to `t` (capped at the run's end).
    pub fn run_until(&mut self, t: SimTime) {
        if !self.started {
            self.started = true;
            self.bootstrap();
        }
        let t = t.min(self.end);
        while let Some(ev) = self.q.pop_until(t) {
            self.processed += 1;
            self.dispatch_event(ev.event);
            self.flush();
        }
        self.q.advance_to(t);
    }

    pub fn run(mut self) -> RunOutput {
        self.run_until(self.end);
        let processed = self.processed;
        self.stats.left_in_jits = self
            .nodes
            .iter()
            .map(|n| match &n.sched {
                Sched::Jits(q) => q.len() as u64,
                _ => 0,
            })
            .sum();
        self.stats.left_in_queues = self
            .nodes
            .iter()
            .map(|n| {
                let queued = match &n.sched {
                    Sched::Jits(q) => q.len(),
                    Sched::Vms(q) => q.len(),
                    Sched::Fifo(q) => q.len(),
                };
                (queued + n.backlog.len()) as u64
            })
            .sum();
        let summary = RunSummary {
            events_processed: processed,
            end: self.q.now(),
        };
        debug!(
            "run seed {} finished: {} events, {} packets",
            self.cfg.seed,
            processed,
            self.log.generated_count()
        );
        RunOutput {
            metrics: self.log.finalize(),
            summary,
            mac: self.radio.stats(),
            queues: self.stats,
        }
    }

    fn bootstrap(&mut self) {
        if let Some(first) = self.emissions.first() {
            self.q.schedule(first.at, Ev::Emit).expect("emissions start at or after zero");
        }
        match self.cfg.routing {
            RoutingMode::Sp => {
                self.q.schedule(SimTime::ZERO, Ev::Flood).expect("time zero");
            }
            RoutingMode::Speed => {
                let period = secs_to_micros(self.cfg.speed.beacon_period_s).max(1);
                for n in 0..self.nodes.len() {
                    let at = self.rng.below(period);
                    self.q.schedule_in(at, Ev::Beacon(n));
                }
            }
            RoutingMode::Gf => {}
        }
    }

    fn dispatch_event(&mut self, ev: Ev) {
        match ev {
            Ev::Mac(m) => self.radio.handle(&mut self.q, &mut self.rng, m, &mut self.notices),
            Ev::Emit => self.on_emit(),
            Ev::Timer(n) => {
                self.nodes[n].timer = None;
                self.try_dispatch(n);
            }
            Ev::Flood => self.on_flood(),
            Ev::Rebroadcast(n) => self.on_rebroadcast(n),
            Ev::Beacon(n) => {
                self.nodes[n].control.push_back(Payload::Beacon);
                self.try_dispatch(n);
                let period = secs_to_micros(self.cfg.speed.beacon_period_s).max(1);
                self.q.schedule_in(period, Ev::Beacon(n));
            }
            Ev::IdleCheck(n) => self.on_idle_check(n),
        }
    }

    fn flush(&mut self) {
        while !self.notices.is_empty() {
            for n in std::mem::take(&mut self.notices) {
                self.on_notice(n);
            }
        }
    }

    fn on_emit(&mut self) {
        let now = self.q.now();
        while let Some(e) = self.emissions.get(self.cursor).copied() {
            if e.at != now {
                self.q.schedule(e.at, Ev::Emit).expect("emissions are sorted");
                break;
            }
            self.cursor += 1;
            self.originate(e);
        }
    }

    fn originate(&mut self, e: Emission) {
        let now = self.q.now();
        let s = e.source;
        let euclid = self.router.euclid_to_sink(s);
        let (e2e, one_hop) = match self.cfg.routing {
            RoutingMode::Speed => (euclid, self.cfg.radio.tx_range_m),
            _ => match (self.router.metric(s), self.router.one_hop(s)) {
                (Ok(m), Ok(h)) => (m, h),
                _ => (0.0, 1.0),
            },
        };
        let id = self.log.generated_count() as u64;
        let mut p = Packet::new(id, s, self.sink, now, e.deadline_rel_us, e.level, e2e, one_hop);
        if self.cfg.sched.policy == Policy::VmsS {
            p.vms_class = Some(vms_priority(euclid, e.deadline_rel_us as i64, self.cfg.sched.vms_thresholds));
        }
        self.log.generated(&p);
        self.forward(s, p);
    }

    fn drop_packet(&mut self, p: &Packet, cause: DropCause) {
        self.log.record_drop(p, cause);
    }

    fn route_cause(e: RouteError) -> DropCause {
        match e {
            RouteError::GfVoid => DropCause::GfVoid,
            RouteError::NoRoute => DropCause::NoRoute,
        }
    }

    fn etd_toward(&self, node: NodeId, next: Option<NodeId>) -> f64 {
        next.and_then(|n| self.nodes[node].etd.get(&n))
            .map(|e| e.value())
            .unwrap_or(self.nominal_etd_us)
    }

    /// A packet is at `node`, freshly generated or just received.
    fn forward(&mut self, node: NodeId, mut p: Packet) {
        let now = self.q.now();
        if node == self.sink {
            self.log.record_delivery(&p, now);
            return;
        }
        p.arrived_at = now;
        p.next_hop = match self.cfg.routing {
            RoutingMode::Speed => None,
            _ => match self.router.next_hop(node) {
                Ok(n) => Some(n),
                Err(e) => return self.drop_packet(&p, Self::route_cause(e)),
            },
        };
        let policy = self.cfg.sched.policy;
        match policy {
            Policy::JitsS | Policy::JitsD | Policy::JitsNl => {
                let dist = match self.router.distance_info(node, &p, policy.distance_mode()) {
                    Ok(d) => d,
                    Err(e) => return self.drop_packet(&p, Self::route_cause(e)),
                };
                let etd = self.etd_toward(node, p.next_hop);
                let delay = target_delay(policy, &p, &dist, etd, now, self.cfg.sched.alpha)
                    .expect("one-hop distance is positive");
                let node_state = &mut self.nodes[node];
                let Sched::Jits(q) = &mut node_state.sched else {
                    unreachable!("policy and queue kind agree")
                };
                self.stats.jits_enqueued += 1;
                if let Some(head) = q.push(p, now, delay) {
                    self.stats.jits_evictions += 1;
                    self.stats.jits_dispatched += 1;
                    node_state.backlog.push_back(head.packet);
                }
                self.stats.max_queue_len = self.stats.max_queue_len.max(q.len());
                self.arm_idle_check(node);
            }
            Policy::VmsS | Policy::VmsD => {
                let class = match (policy, p.vms_class) {
                    (Policy::VmsS, Some(c)) => c,
                    _ => {
                        let d = self.router.euclid_to_sink(node);
                        vms_priority(d, p.remaining_slack_us(now), self.cfg.sched.vms_thresholds)
                    }
                };
                p.vms_class = Some(class);
                let Sched::Vms(q) = &mut self.nodes[node].sched else {
                    unreachable!("policy and queue kind agree")
                };
                if let Err(p) = q.push(class, p) {
                    return self.drop_packet(&p, DropCause::VmsOverflow);
                }
                self.stats.max_queue_len = self.stats.max_queue_len.max(q.len());
            }
            Policy::Fifo => {
                let Sched::Fifo(q) = &mut self.nodes[node].sched else {
                    unreachable!("policy and queue kind agree")
                };
                if let Err(p) = q.push(p) {
                    return self.drop_packet(&p, DropCause::FifoOverflow);
                }
                self.stats.max_queue_len = self.stats.max_queue_len.max(q.len());
            }
        }
        self.try_dispatch(node);
    }

    /// Next data packet ready for the MAC, with its MAC priority class.
    fn next_data(&mut self, node: NodeId) -> Option<(Packet, Option<u8>)> {
        let now = self.q.now();
        let n = &mut self.nodes[node];
        if let Some(p) = n.backlog.pop_front() {
            return Some((p, None));
        }
        match &mut n.sched {
            Sched::Jits(q) => {
                let qp = q.pop_due(now)?;
                self.stats.jits_dispatched += 1;
                Some((qp.packet, None))
            }
            Sched::Vms(q) => q.pop().map(|(c, p)| (p, Some(c))),
            Sched::Fifo(q) => q.pop().map(|p| (p, None)),
        }
    }

    /// Hands the next frame to the MAC if it is free.
    fn try_dispatch(&mut self, node: NodeId) {
        if self.radio.is_free(node) {
            if let Some(payload) = self.nodes[node].control.pop_front() {
                self.send(node, Destination::Broadcast, None, payload);
            } else {
                while let Some((p, class)) = self.next_data(node) {
                    let dst = match p.next_hop {
                        Some(d) => d,
                        None => {
                            let sink_pos = self.router.sink_position();
                            let table = self.nodes[node].speed.as_ref().expect("SPEED node has a table");
                            match table.select(&sink_pos, &self.cfg.speed, &mut self.rng) {
                                Ok(d) => d,
                                Err(SpeedDrop::Void) => {
                                    self.drop_packet(&p, DropCause::SpeedVoid);
                                    continue;
                                }
                                Err(SpeedDrop::Setpoint) => {
                                    self.drop_packet(&p, DropCause::SpeedSetpoint);
                                    continue;
                                }
                            }
                        }
                    };
                    self.send(node, Destination::Unicast(dst), class, Payload::Data(Box::new(p)));
                    break;
                }
            }
        }
        self.rearm_timer(node);
    }

    fn send(&mut self, node: NodeId, dst: Destination, class: Option<u8>, payload: Payload) {
        let size_bytes = self.cfg.radio.data_bytes;
        let frame = Frame {
            src: node,
            dst,
            size_bytes,
            mac_priority: class,
            payload,
        };
        let r = if class.is_some() {
            self.radio
                .mac_send_prioritized(&mut self.q, &mut self.rng, frame, &mut self.notices)
        } else {
            self.radio.mac_send(&mut self.q, &mut self.rng, frame, &mut self.notices)
        };
        r.expect("MAC checked free and class in range");
    }

    /// Keeps the node's timer on the earliest future target time. A head
    /// that is already due waits for the MAC to free up instead.
    fn rearm_timer(&mut self, node: NodeId) {
        let now = self.q.now();
        let n = &mut self.nodes[node];
        let Sched::Jits(q) = &n.sched else { return };
        let want = q.head_target().filter(|&t| t > now);
        match (want, n.timer) {
            (Some(t), Some((cur, _))) if t == cur => {}
            (want, cur) => {
                if let Some((_, h)) = cur {
                    self.q.cancel(h);
                }
                n.timer = want.map(|t| {
                    let h = self.q.schedule(t, Ev::Timer(node)).expect("target is in the future");
                    (t, h)
                });
            }
        }
    }

    fn arm_idle_check(&mut self, node: NodeId) {
        if !self.radio_reports_idle() {
            return;
        }
        if let Some(h) = self.nodes[node].idle_check.take() {
            self.q.cancel(h);
        }
        let h = self.q.schedule_in(self.idle_threshold_us, Ev::IdleCheck(node));
        self.nodes[node].idle_check = Some(h);
    }

    fn radio_reports_idle(&self) -> bool {
        self.cfg.sched.idle_detection && self.cfg.sched.policy.is_jits()
    }

    /// Sends the head early if the medium has stayed idle long enough.
    fn on_idle_check(&mut self, node: NodeId) {
        self.nodes[node].idle_check = None;
        let now = self.q.now();
        let Some(since) = self.radio.idle_since(node) else { return };
        if !self.radio.is_free(node) {
            return;
        }
        let ready = since + self.idle_threshold_us;
        if ready > now {
            let h = self.q.schedule(ready, Ev::IdleCheck(node)).expect("future check");
            self.nodes[node].idle_check = Some(h);
            return;
        }
        let n = &mut self.nodes[node];
        let Sched::Jits(q) = &mut n.sched else { return };
        if let Some(qp) = q.pop() {
            self.stats.jits_dispatched += 1;
            self.stats.idle_dispatches += 1;
            n.backlog.push_back(qp.packet);
            self.try_dispatch(node);
        }
    }

    fn on_flood(&mut self) {
        self.flood_seq += 1;
        let seq = self.flood_seq;
        self.router.sp_mut().start_round(seq);
        self.nodes[self.sink].control.push_back(Payload::Advert { seq, hops: 0 });
        self.try_dispatch(self.sink);
        let period = secs_to_micros(self.cfg.routing_period_s).max(1);
        self.q.schedule_in(period, Ev::Flood);
    }

    fn on_rebroadcast(&mut self, node: NodeId) {
        self.nodes[node].rebroadcast_pending = false;
        if let Some(e) = self.router.sp().entry(node) {
            self.nodes[node].control.push_back(Payload::Advert {
                seq: e.advert_seq,
                hops: e.hop_count,
            });
            self.try_dispatch(node);
        }
    }

    fn on_advert(&mut self, node: NodeId, from: NodeId, seq: u64, hops: u32) {
        let changed = self.router.sp_mut().on_advert(node, from, seq, hops).is_some();
        if changed && !self.nodes[node].rebroadcast_pending {
            self.nodes[node].rebroadcast_pending = true;
            let jitter = self.rng.below(REBROADCAST_JITTER_US + 1);
            self.q.schedule_in(jitter, Ev::Rebroadcast(node));
        }
    }

    fn on_notice(&mut self, notice: MacNotice<Payload>) {
        let now = self.q.now();
        match notice {
            MacNotice::Received { node, from, payload } => match payload {
                Payload::Data(p) => {
                    let mut p = *p;
                    p.hops += 1;
                    self.forward(node, p);
                }
                Payload::Advert { seq, hops } => self.on_advert(node, from, seq, hops),
                Payload::Beacon => {
                    let pos = self.radio.graph().position(from);
                    if let Some(t) = self.nodes[node].speed.as_mut() {
                        t.on_beacon(from, pos);
                    }
                }
            },
            MacNotice::Completed {
                node,
                frame,
                outcome,
                accepted_at,
                ..
            } => {
                if let (Payload::Data(p), Destination::Unicast(dst)) = (frame.payload, frame.dst) {
                    match outcome {
                        MacOutcome::Delivered => {
                            let beta = self.cfg.radio.etd_beta;
                            let nominal = self.nominal_etd_us;
                            let sample = now.since(accepted_at).max(1) as f64;
                            self.nodes[node]
                                .etd
                                .entry(dst)
                                .or_insert_with(|| Ewma::new(beta, nominal))
                                .observe(sample);
                            if let Some(t) = self.nodes[node].speed.as_mut() {
                                let sink_pos = self.router.sink_position();
                                let hop = now.since(p.arrived_at) as f64;
                                t.observe_delay(dst, hop, &sink_pos, self.cfg.speed.setpoint_mps);
                            }
                        }
                        MacOutcome::Dropped(_) => self.drop_packet(&p, DropCause::Mac),
                    }
                }
                self.try_dispatch(node);
            }
            MacNotice::MediumIdle { node } => {
                let pending = match &self.nodes[node].sched {
                    Sched::Jits(q) => !q.is_empty(),
                    _ => false,
                };
                if pending {
                    self.arm_idle_check(node);
                }
            }
        }
    }
}

/// Builds and runs one configuration.
pub fn run(cfg: SimConfig) -> Result<RunOutput, SimError> {
    Ok(Simulation::new(cfg)?.run())
}
