use std::collections::VecDeque;

use jits_core::network::{SimConfig, Simulation};
use jits_core::radio::{neighbors_of, RadioGraph};
use jits_core::routing::{Point, RoutingMode, SpTables};
use jits_core::scenarios::Topology;
use jits_core::sim::{SimRng, SimTime};
use jits_core::Position;

pub const TOPOLOGIES: usize = 50;
const RANGE: f64 = 250.0;

fn bfs(pos: &[Position], sink: usize) -> Vec<Option<u32>> {
    let mut d = vec![None; pos.len()];
    d[sink] = Some(0);
    let mut q = VecDeque::from([sink]);
    while let Some(u) = q.pop_front() {
        for v in 0..pos.len() {
            let close = v != u && pos[u].distance(&pos[v]) <= RANGE;
            if close && d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}

/// Uniform placements of 10 to 50 nodes, redrawn until connected.
fn connected_topologies() -> Vec<(Topology, Vec<u32>)> {
    let mut rng = SimRng::new(2024);
    let mut out = Vec::new();
    while out.len() < TOPOLOGIES {
        let n = 10 + rng.below(41) as usize;
        let side = 150.0 * (n as f64).sqrt();
        let pos: Vec<Position> = (0..n)
            .map(|_| {
                let x = rng.unit() * side;
                Point::new(x, rng.unit() * side)
            })
            .collect();
        let sink = rng.below(n as u64) as usize;
        let d = bfs(&pos, sink);
        if d.iter().all(Option::is_some) {
            let d = d.into_iter().map(Option::unwrap).collect();
            out.push((Topology { positions: pos, sink }, d));
        }
    }
    out
}

/// One lossless flood, advertisements delivered in random order.
pub fn check_one_flood_matches_bfs() {
    let mut rng = SimRng::new(7);
    for (i, (topo, dist)) in connected_topologies().into_iter().enumerate() {
        let n = topo.positions.len();
        let graph = RadioGraph::new(topo.positions, RANGE, 550.0);
        let mut t = SpTables::new(n, topo.sink);
        let e = t.start_round(1);
        let mut pending = vec![(topo.sink, e.hop_count)];
        while !pending.is_empty() {
            let k = rng.below(pending.len() as u64) as usize;
            let (from, hops) = pending.swap_remove(k);
            for &(to, _) in graph.neighbors(from) {
                if let Some(e) = t.on_advert(to, from, 1, hops) {
                    pending.push((to, e.hop_count));
                }
            }
        }
        for node in 0..n {
            let e = t.entry(node).unwrap();
            assert_eq!(e.hop_count, dist[node], "topology {i} node {node}");
            if node != topo.sink {
                assert_eq!(dist[e.next_hop] + 1, dist[node], "topology {i} node {node}");
            }
        }
    }
}

#[test]
fn oracle_agrees_with_neighbor_scan() {
    for (topo, _) in connected_topologies().iter().take(5) {
        for n in 0..topo.positions.len() {
            for (m, dist) in neighbors_of(&topo.positions, n, RANGE) {
                assert!(dist <= RANGE && m != n);
            }
        }
    }
}

/// A quiet network: after a few flood rounds every node holds its BFS
/// distance and a next hop one step closer.
pub fn check_quiet_network_converges() {
    for (i, (topo, dist)) in connected_topologies().into_iter().enumerate() {
        let n = topo.positions.len();
        let sink = topo.sink;
        let mut cfg = SimConfig::default();
        cfg.seed = i as u64 + 1;
        cfg.routing = RoutingMode::Sp;
        cfg.traffic.generation_s = 0.0;
        cfg.drain_s = 61.0;
        let mut sim = Simulation::with_topology(cfg, topo).unwrap();
        sim.run_until(SimTime::from_secs(61));
        for node in (0..n).filter(|&m| m != sink) {
            let e = sim
                .router()
                .sp()
                .entry(node)
                .unwrap_or_else(|| panic!("topology {i}: node {node} has no route"));
            assert_eq!(e.hop_count, dist[node], "topology {i} node {node}");
            assert_eq!(dist[e.next_hop] + 1, dist[node], "topology {i} node {node}");
        }
    }
}

#[test]
fn one_flood_matches_bfs_on_random_topologies() {
    check_one_flood_matches_bfs();
}

#[test]
fn quiet_network_converges_to_bfs() {
    check_quiet_network_converges();
}
