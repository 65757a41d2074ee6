use crate::routing::Point;
use crate::scalar::Scalar;
use crate::{NodeId, Position};

/// Nodes within `range` of `node` (closed ball), excluding itself, by id.
pub fn neighbors_of<S: Scalar>(positions: &[Point<S>], node: NodeId, range: S) -> Vec<(NodeId, S)> {
    let me = positions[node];
    positions
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != node)
        .map(|(id, p)| (id, me.distance(p)))
        .filter(|&(_, d)| d <= range)
        .collect()
}

/// Static connectivity derived from node positions: who can decode whom,
/// and whose transmissions are sensed by or interfere at whom.
#[derive(Debug, Clone)]
pub struct RadioGraph {
    positions: Vec<Position>,
    tx_neighbors: Vec<Vec<(NodeId, f64)>>,
    cs_neighbors: Vec<Vec<NodeId>>,
    interferes: Vec<bool>,
}

impl RadioGraph {
    pub fn new(positions: Vec<Position>, tx_range: f64, interference_range: f64) -> Self {
        let n = positions.len();
        let tx_neighbors = (0..n).map(|i| neighbors_of(&positions, i, tx_range)).collect();
        let cs_neighbors = (0..n)
            .map(|i| {
                neighbors_of(&positions, i, interference_range)
                    .into_iter()
                    .map(|(id, _)| id)
                    .collect()
            })
            .collect();
        let mut interferes = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                interferes[a * n + b] = positions[a].distance(&positions[b]) <= interference_range;
            }
        }
        RadioGraph {
            positions,
            tx_neighbors,
            cs_neighbors,
            interferes,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, node: NodeId) -> Position {
        self.positions[node]
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    /// Decodable neighbors with their distances, ascending id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.tx_neighbors[node]
    }

    pub fn in_range(&self, a: NodeId, b: NodeId) -> bool {
        self.tx_neighbors[a].iter().any(|&(id, _)| id == b)
    }

    /// Nodes that sense a transmission by `node` (excluding `node`).
    pub fn sensing(&self, node: NodeId) -> &[NodeId] {
        &self.cs_neighbors[node]
    }

    /// Whether a transmission from `src` corrupts reception at `rx`.
    pub fn interferes(&self, src: NodeId, rx: NodeId) -> bool {
        self.interferes[src * self.positions.len() + rx]
    }
}
