use std::sync::Arc;

use super::{
    gf_next_hop, progress, DistanceInfo, DistanceMode, Metric, OneHopRule, Point, RouteEntry, RouteError,
    RoutingMode, SpTables,
};
use crate::radio::RadioGraph;
use crate::rtsched::Packet;
use crate::NodeId;

/// Progress below this many meters is treated as degenerate.
const MIN_PROGRESS_M: f64 = 1.0;

/// Routing state of a whole run.
#[derive(Debug, Clone)]
pub struct Router {
    mode: RoutingMode,
    sink: NodeId,
    graph: Arc<RadioGraph>,
    tx_range: f64,
    one_hop_rule: OneHopRule,
    sp: SpTables,
}

impl Router {
    pub fn new(mode: RoutingMode, graph: Arc<RadioGraph>, sink: NodeId, tx_range: f64, one_hop_rule: OneHopRule) -> Self {
        let sp = SpTables::new(graph.len(), sink);
        Router {
            mode,
            sink,
            graph,
            tx_range,
            one_hop_rule,
            sp,
        }
    }

    pub fn mode(&self) -> RoutingMode {
        self.mode
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn sp(&self) -> &SpTables {
        &self.sp
    }

    pub fn sp_mut(&mut self) -> &mut SpTables {
        &mut self.sp
    }

    pub fn sink_position(&self) -> Point<f64> {
        self.graph.position(self.sink)
    }

    pub fn euclid_to_sink(&self, node: NodeId) -> f64 {
        self.graph.position(node).distance(&self.sink_position())
    }

    pub fn next_hop(&self, node: NodeId) -> Result<NodeId, RouteError> {
        match self.mode {
            RoutingMode::Sp => self.sp.entry(node).map(|e| e.next_hop).ok_or(RouteError::NoRoute),
            RoutingMode::Gf | RoutingMode::Speed => {
                let here = self.graph.position(node);
                let nbrs = self
                    .graph
                    .neighbors(node)
                    .iter()
                    .map(|&(id, _)| (id, self.graph.position(id)));
                gf_next_hop(&here, nbrs, &self.sink_position())
            }
        }
    }

    pub fn route_entry(&self, node: NodeId) -> Result<RouteEntry, RouteError> {
        let next_hop = self.next_hop(node)?;
        let metric = match self.mode {
            RoutingMode::Sp => {
                let e = self.sp.entry(node).ok_or(RouteError::NoRoute)?;
                return Ok(RouteEntry {
                    next_hop,
                    metric: Metric::Hops(e.hop_count),
                    advert_seq: Some(e.advert_seq),
                });
            }
            _ => Metric::Meters(self.euclid_to_sink(node)),
        };
        Ok(RouteEntry {
            next_hop,
            metric,
            advert_seq: None,
        })
    }

    /// Distance from `node` to the sink in the protocol metric.
    pub fn metric(&self, node: NodeId) -> Result<f64, RouteError> {
        match self.mode {
            RoutingMode::Sp => self
                .sp
                .entry(node)
                .map(|e| e.hop_count as f64)
                .ok_or(RouteError::NoRoute),
            _ => Ok(self.euclid_to_sink(node)),
        }
    }

    /// Length of one hop from `node`, in the protocol metric.
    pub fn one_hop(&self, node: NodeId) -> Result<f64, RouteError> {
        match (self.mode, self.one_hop_rule) {
            (RoutingMode::Sp, _) => Ok(1.0),
            (_, OneHopRule::Range) => Ok(self.tx_range),
            (_, OneHopRule::Progress) => {
                let next = self.next_hop(node)?;
                let sink = self.sink_position();
                let p = progress(&self.graph.position(node), &self.graph.position(next), &sink);
                Ok(if p < MIN_PROGRESS_M { self.tx_range } else { p })
            }
        }
    }

    pub fn distance_info(&self, node: NodeId, packet: &Packet, mode: DistanceMode) -> Result<DistanceInfo<f64>, RouteError> {
        let remaining = self.metric(node)?;
        Ok(match mode {
            DistanceMode::AtSource => DistanceInfo {
                e2e: packet.source_e2e,
                one_hop: packet.source_one_hop,
                remaining,
            },
            DistanceMode::AtForwarder => DistanceInfo {
                e2e: remaining,
                one_hop: self.one_hop(node)?,
                remaining,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SimTime;

    fn line_graph() -> Arc<RadioGraph> {
        let pos = (0..6).map(|i| Point::new(i as f64 * 111.0, 0.0)).collect();
        Arc::new(RadioGraph::new(pos, 250.0, 550.0))
    }

    fn packet(source_e2e: f64, source_one_hop: f64) -> Packet {
        Packet::new(0, 5, 0, SimTime::ZERO, 1_000_000, 0, source_e2e, source_one_hop)
    }

    #[test]
    fn sp_distance_modes() {
        let g = line_graph();
        let mut r = Router::new(RoutingMode::Sp, g, 0, 250.0, OneHopRule::Progress);
        r.sp_mut().start_round(1);
        r.sp_mut().on_advert(2, 0, 1, 0);
        r.sp_mut().on_advert(2, 1, 1, 0);
        let p = packet(5.0, 1.0);
        let at_src = r.distance_info(2, &p, DistanceMode::AtSource).unwrap();
        let at_fwd = r.distance_info(2, &p, DistanceMode::AtForwarder).unwrap();
        assert_eq!(at_src.e2e, 5.0);
        assert_eq!(at_fwd.e2e, 1.0);
        assert_eq!(at_fwd.remaining, 1.0);
        assert_eq!(r.distance_info(4, &p, DistanceMode::AtForwarder), Err(RouteError::NoRoute));
    }

    #[test]
    fn gf_forwarder_distance_and_progress() {
        let pos = vec![Point::new(0.0, 0.0), Point::new(189.0, 0.0), Point::new(300.0, 0.0)];
        let g = Arc::new(RadioGraph::new(pos, 250.0, 550.0));
        let r = Router::new(RoutingMode::Gf, g, 0, 250.0, OneHopRule::Progress);
        let p = packet(300.0, 111.0);
        let d = r.distance_info(2, &p, DistanceMode::AtForwarder).unwrap();
        assert_eq!(d.e2e, 300.0);
        assert!((d.one_hop - 111.0).abs() < 1e-9);
        assert_eq!(r.next_hop(2), Ok(1));
    }

    #[test]
    fn range_rule_uses_tx_range() {
        let r = Router::new(RoutingMode::Gf, line_graph(), 0, 250.0, OneHopRule::Range);
        assert_eq!(r.one_hop(4).unwrap(), 250.0);
    }
}
