use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpEntry {
    pub next_hop: NodeId,
    pub hop_count: u32,
    pub advert_seq: u64,
}

/// Rounds a node keeps its next hop without hearing from it before it
/// accepts a longer route from someone else.
pub const PARENT_GRACE_ROUNDS: u64 = 8;

/// Per-node shortest-path entries learned from sink advertisements.
#[derive(Debug, Clone)]
pub struct SpTables {
    sink: NodeId,
    entries: Vec<Option<SpEntry>>,
    /// Latest round in which each node heard its current next hop.
    parent_heard: Vec<u64>,
}

impl SpTables {
    pub fn new(node_count: usize, sink: NodeId) -> Self {
        SpTables {
            sink,
            entries: vec![None; node_count],
            parent_heard: vec![0; node_count],
        }
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn entry(&self, node: NodeId) -> Option<SpEntry> {
        self.entries[node]
    }

    /// The sink starts advertisement round `seq`.
    pub fn start_round(&mut self, seq: u64) -> SpEntry {
        let e = SpEntry {
            next_hop: self.sink,
            hop_count: 0,
            advert_seq: seq,
        };
        self.entries[self.sink] = Some(e);
        e
    }

    /// `node` heard `from` advertise `from_hops` in round `seq`. Returns the
    /// entry when it changed or moved to a newer round, meaning `node`
    /// should re-advertise.
    ///
    /// Within a round only a strictly shorter path replaces the entry. A
    /// newer round is always taken up, but a longer path from a different
    /// neighbor only displaces the current next hop once that next hop has
    /// gone unheard for [`PARENT_GRACE_ROUNDS`] rounds; until then the node
    /// re-advertises its existing route under the new round.
    pub fn on_advert(&mut self, node: NodeId, from: NodeId, seq: u64, from_hops: u32) -> Option<SpEntry> {
        if node == self.sink {
            return None;
        }
        let candidate = SpEntry {
            next_hop: from,
            hop_count: from_hops + 1,
            advert_seq: seq,
        };
        let cur = match self.entries[node] {
            None => return Some(self.adopt(node, candidate)),
            Some(cur) => cur,
        };
        if from == cur.next_hop {
            self.parent_heard[node] = self.parent_heard[node].max(seq);
        }
        if seq > cur.advert_seq {
            let parent_silent = self.parent_heard[node] + PARENT_GRACE_ROUNDS < seq;
            if candidate.hop_count <= cur.hop_count || from == cur.next_hop || parent_silent {
                return Some(self.adopt(node, candidate));
            }
            let kept = SpEntry { advert_seq: seq, ..cur };
            self.entries[node] = Some(kept);
            return Some(kept);
        }
        if seq == cur.advert_seq && candidate.hop_count < cur.hop_count {
            return Some(self.adopt(node, candidate));
        }
        None
    }

    fn adopt(&mut self, node: NodeId, e: SpEntry) -> SpEntry {
        self.entries[node] = Some(e);
        self.parent_heard[node] = e.advert_seq;
        e
    }
}
