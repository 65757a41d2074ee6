use super::{Packet, Policy};
use crate::error::SimError;
use crate::routing::{hop_equivalents, DistanceInfo};
use crate::scalar::{round_micros, Scalar};
use crate::sim::SimTime;

/// Per-hop share of the controllable slack: `(slack - eetd) / divisor * alpha`,
/// clamped at zero so late packets are forwarded immediately.
pub fn allocate_slack<S: Scalar>(slack: S, eetd: S, divisor: S, alpha: S) -> S {
    let share = (slack - eetd) / divisor * alpha;
    if share > S::zero() {
        share
    } else {
        S::zero()
    }
}

/// Intentional queuing delay, in whole microseconds, for `packet` at a node
/// whose one-hop delay estimate is `etd_us`.
///
/// `dist` must come from the distance mode the policy uses: source-to-sink
/// for `jits_s`, current-node-to-sink otherwise. Distances are converted to
/// hop equivalents (`distance / one_hop`), so shortest-path and geographic
/// routing share one formula. Linear policies never divide by less than one
/// hop. FIFO and VMS never delay.
pub fn target_delay<S: Scalar>(
    policy: Policy,
    packet: &Packet,
    dist: &DistanceInfo<S>,
    etd_us: S,
    now: SimTime,
    alpha: S,
) -> Result<u64, SimError> {
    let delay = match policy {
        Policy::Fifo | Policy::VmsS | Policy::VmsD => return Ok(0),
        Policy::JitsS => {
            let hops = hop_equivalents(dist.e2e, dist.one_hop)?;
            let slack = S::from_micros(packet.deadline_rel_us);
            allocate_slack(slack, etd_us * hops, hops.max(S::one()), alpha)
        }
        Policy::JitsD => {
            let hops = hop_equivalents(dist.e2e, dist.one_hop)?;
            let slack = S::lit(packet.remaining_slack_us(now) as f64);
            allocate_slack(slack, etd_us * hops, hops.max(S::one()), alpha)
        }
        Policy::JitsNl => {
            let hops = hop_equivalents(dist.e2e, dist.one_hop)?;
            let ratio = hop_equivalents(dist.remaining, dist.one_hop)?;
            let slack = S::lit(packet.remaining_slack_us(now) as f64);
            allocate_slack(slack, etd_us * hops, ratio.exp2(), alpha)
        }
    };
    Ok(round_micros(delay))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Packet created at t=0 whose deadline leaves `slack_us` at `now`.
    fn packet_with_slack(slack_us: u64, now: SimTime) -> Packet {
        Packet::new(1, 9, 0, SimTime::ZERO, now.as_micros() + slack_us, 0, 4.0, 1.0)
    }

    fn sp(h: f64) -> DistanceInfo<f64> {
        DistanceInfo {
            e2e: h,
            one_hop: 1.0,
            remaining: h,
        }
    }

    #[test]
    fn dynamic_linear_hand_value() {
        // (1.0 s - 4 * 50 ms) / 4 * 0.7 = 140 ms
        let now = SimTime::from_millis(300);
        let p = packet_with_slack(1_000_000, now);
        assert_eq!(target_delay(Policy::JitsD, &p, &sp(4.0), 50_000.0, now, 0.7).unwrap(), 140_000);
        let f = DistanceInfo {
            e2e: 4.0_f32,
            one_hop: 1.0,
            remaining: 4.0,
        };
        assert_eq!(target_delay(Policy::JitsD, &p, &f, 50_000.0_f32, now, 0.7).unwrap(), 140_000);
    }

    #[test]
    fn non_linear_hand_value() {
        // EETD = 200 ms over h = 3: (1.0 - 0.2) / 2^3 * 0.7 = 70 ms
        let now = SimTime::ZERO;
        let p = packet_with_slack(1_000_000, now);
        let etd = 200_000.0 / 3.0;
        assert_eq!(target_delay(Policy::JitsNl, &p, &sp(3.0), etd, now, 0.7).unwrap(), 70_000);
    }

    #[test]
    fn static_uses_relative_deadline() {
        let p = Packet::new(1, 9, 0, SimTime::ZERO, 1_000_000, 0, 4.0, 1.0);
        let late = SimTime::from_millis(900);
        // unaffected by elapsed time
        assert_eq!(target_delay(Policy::JitsS, &p, &sp(4.0), 50_000.0, late, 0.7).unwrap(), 140_000);
    }

    #[test]
    fn slack_below_eetd_forwards_immediately() {
        let now = SimTime::ZERO;
        let p = packet_with_slack(100_000, now);
        assert_eq!(target_delay(Policy::JitsD, &p, &sp(4.0), 50_000.0, now, 0.7).unwrap(), 0);
        let expired = SimTime::from_secs(5);
        assert_eq!(target_delay(Policy::JitsNl, &p, &sp(1.0), 1.0, expired, 0.7).unwrap(), 0);
    }

    #[test]
    fn baselines_never_delay() {
        let p = packet_with_slack(1_000_000, SimTime::ZERO);
        for pol in [Policy::Fifo, Policy::VmsS, Policy::VmsD] {
            assert_eq!(target_delay(pol, &p, &sp(4.0), 50.0, SimTime::ZERO, 0.7).unwrap(), 0);
        }
    }

    #[test]
    fn geographic_form_matches_hop_form_for_uniform_progress() {
        let p = packet_with_slack(2_000_000, SimTime::ZERO);
        let gf = DistanceInfo {
            e2e: 500.0,
            one_hop: 125.0,
            remaining: 500.0,
        };
        let a = target_delay(Policy::JitsD, &p, &gf, 50_000.0, SimTime::ZERO, 0.7).unwrap();
        let b = target_delay(Policy::JitsD, &p, &sp(4.0), 50_000.0, SimTime::ZERO, 0.7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_one_hop_is_an_error() {
        let p = packet_with_slack(1, SimTime::ZERO);
        let d = DistanceInfo {
            e2e: 3.0,
            one_hop: 0.0,
            remaining: 3.0,
        };
        assert!(target_delay(Policy::JitsD, &p, &d, 1.0, SimTime::ZERO, 0.7).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_eetd_and_slack(slack in 1_000.0f64..5e6, e1 in 0.0f64..2e5, e2 in 0.0f64..2e5,
                                      extra in 0.0f64..1e6, h in 1.0f64..12.0) {
            let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(allocate_slack(slack, hi, h, 0.7) <= allocate_slack(slack, lo, h, 0.7));
            prop_assert!(allocate_slack(slack + extra, lo, h, 0.7) >= allocate_slack(slack, lo, h, 0.7));
        }

        #[test]
        fn non_linear_halves_per_extra_hop(slack in 1e4f64..5e6, eetd in 0.0f64..1e4, h in 1u32..10) {
            let near = allocate_slack(slack, eetd, 2f64.powi(h as i32 - 1), 0.7);
            let far = allocate_slack(slack, eetd, 2f64.powi(h as i32), 0.7);
            prop_assert!(far <= near / 2.0 + 1e-9);
        }

        #[test]
        fn dynamic_is_homogeneous(slack in 1e4f64..5e6, etd in 0.0f64..5e4, h in 1.0f64..10.0) {
            let a = allocate_slack(2.0 * slack, 2.0 * etd * h, h, 0.7);
            let b = 2.0 * allocate_slack(slack, etd * h, h, 0.7);
            prop_assert!((a - b).abs() <= 1e-6 * b.max(1.0));
        }
    }
}
