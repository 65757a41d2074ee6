use crate::error::SimError;
use crate::scalar::Scalar;

/// Distances feeding the delay estimate, all in the routing metric
/// (hops for shortest-path, meters for geographic forwarding).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceInfo<S> {
    /// End-to-end distance the policy budgets over.
    pub e2e: S,
    /// Length of one hop.
    pub one_hop: S,
    /// Current node to sink.
    pub remaining: S,
}

/// Which end-to-end distance a policy uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// Source-to-sink, fixed when the packet was generated.
    AtSource,
    /// Current node to sink.
    AtForwarder,
}

/// Distance expressed in hops: `distance / one_hop`.
pub fn hop_equivalents<S: Scalar>(distance: S, one_hop: S) -> Result<S, SimError> {
    if !(one_hop > S::zero()) {
        return Err(SimError::ZeroOneHop(one_hop.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(distance / one_hop)
}

/// End-to-end transmission delay estimate: ETD scaled by the number of hops
/// the end-to-end distance spans.
pub fn eetd<S: Scalar>(etd: S, dist: &DistanceInfo<S>) -> Result<S, SimError> {
    Ok(etd * hop_equivalents(dist.e2e, dist.one_hop)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(h: f64) -> DistanceInfo<f64> {
        DistanceInfo {
            e2e: h,
            one_hop: 1.0,
            remaining: h,
        }
    }

    #[test]
    fn hop_count_scaling() {
        assert_eq!(eetd(50_000.0, &sp(4.0)).unwrap(), 200_000.0);
        assert_eq!(eetd(50_000.0, &sp(1.0)).unwrap(), 50_000.0);
    }

    #[test]
    fn geographic_scaling() {
        let d = DistanceInfo {
            e2e: 500.0,
            one_hop: 125.0,
            remaining: 500.0,
        };
        assert_eq!(eetd(50_000.0, &d).unwrap(), 200_000.0);
    }

    #[test]
    fn zero_one_hop_rejected() {
        let d = DistanceInfo {
            e2e: 500.0_f32,
            one_hop: 0.0,
            remaining: 500.0,
        };
        assert!(eetd(1.0, &d).is_err());
    }

    #[test]
    fn linear_in_etd() {
        let d = DistanceInfo {
            e2e: 733.0,
            one_hop: 111.0,
            remaining: 733.0,
        };
        for k in [0.5, 2.0, 7.0] {
            let a: f64 = eetd(k * 1234.0, &d).unwrap();
            let b = k * eetd(1234.0, &d).unwrap();
            assert!((a - b).abs() < 1e-6);
        }
    }
}
