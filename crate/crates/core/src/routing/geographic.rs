use super::{Point, RouteError};
use crate::scalar::Scalar;
use crate::NodeId;

/// Reduction in distance-to-`dest` when moving from `from` to `to`.
pub fn progress<S: Scalar>(from: &Point<S>, to: &Point<S>, dest: &Point<S>) -> S {
    from.distance(dest) - to.distance(dest)
}

/// Greedy choice: the neighbor closest to the sink, provided it is strictly
/// closer than the current node. Ties go to the lowest id.
pub fn gf_next_hop<S, I>(here: &Point<S>, neighbors: I, sink: &Point<S>) -> Result<NodeId, RouteError>
where
    S: Scalar,
    I: IntoIterator<Item = (NodeId, Point<S>)>,
{
    let own = here.distance(sink);
    let mut best: Option<(S, NodeId)> = None;
    for (id, p) in neighbors {
        let d = p.distance(sink);
        if d >= own {
            continue;
        }
        best = match best {
            Some((bd, bid)) if bd < d || (bd == d && bid < id) => Some((bd, bid)),
            _ => Some((d, id)),
        };
    }
    best.map(|(_, id)| id).ok_or(RouteError::GfVoid)
}
