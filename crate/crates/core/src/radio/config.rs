use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Physical and MAC-layer parameters.
///
/// Range, bandwidth and frame size defaults follow the evaluated
/// configuration (250 m, 2 Mb/s, 32-byte payloads). The DCF timing constants
/// are the standard 802.11 DSSS values; the framing overheads approximate an
/// 802.11 long preamble plus MAC/IP headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub tx_range_m: f64,
    pub interference_range_m: f64,
    pub bandwidth_bps: u64,
    pub slot_us: u64,
    pub difs_us: u64,
    pub sifs_us: u64,
    pub cw_min: u32,
    pub cw_max: u32,
    pub retry_limit: u32,
    pub etd_beta: f64,
    /// PLCP preamble and header, sent before every frame.
    pub phy_overhead_us: u64,
    /// MAC header, FCS and network header bytes added to every data frame.
    pub header_bytes: u32,
    pub ack_bytes: u32,
    pub data_bytes: u32,
}

impl Default for RadioConfig {
    fn default() -> Self {
        RadioConfig {
            tx_range_m: 250.0,
            interference_range_m: 550.0,
            bandwidth_bps: 2_000_000,
            slot_us: 20,
            difs_us: 50,
            sifs_us: 10,
            cw_min: 31,
            cw_max: 1023,
            retry_limit: 7,
            etd_beta: 0.8,
            phy_overhead_us: 192,
            header_bytes: 52,
            ack_bytes: 14,
            data_bytes: 32,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if !(self.tx_range_m > 0.0) {
            return bad("tx_range_m must be positive");
        }
        if !(self.interference_range_m >= self.tx_range_m) {
            return bad("interference_range_m must be at least tx_range_m");
        }
        if self.bandwidth_bps == 0 {
            return bad("bandwidth_bps must be positive");
        }
        if self.slot_us == 0 {
            return bad("slot_us must be positive");
        }
        if self.cw_min == 0 || self.cw_min > self.cw_max {
            return bad("need 0 < cw_min <= cw_max");
        }
        if self.retry_limit < 1 {
            return bad("retry_limit must be at least 1");
        }
        if !(self.etd_beta >= 0.0 && self.etd_beta < 1.0) {
            return bad("etd_beta must lie in [0, 1)");
        }
        if self.data_bytes == 0 {
            return bad("data_bytes must be positive");
        }
        Ok(())
    }

    /// Serialization time of `bytes` at the channel bit rate, rounded up.
    pub fn payload_airtime_us(&self, bytes: u32) -> u64 {
        let bits_us = bytes as u64 * 8 * 1_000_000;
        bits_us.div_ceil(self.bandwidth_bps)
    }

    /// Air time of a data or control frame carrying `payload_bytes`.
    pub fn frame_airtime_us(&self, payload_bytes: u32) -> u64 {
        self.phy_overhead_us + self.payload_airtime_us(payload_bytes + self.header_bytes)
    }

    pub fn ack_airtime_us(&self) -> u64 {
        self.phy_overhead_us + self.payload_airtime_us(self.ack_bytes)
    }

    /// Channel occupancy of a unicast exchange: data, SIFS, ACK.
    pub fn unicast_exchange_us(&self, payload_bytes: u32) -> u64 {
        self.frame_airtime_us(payload_bytes) + self.sifs_us + self.ack_airtime_us()
    }

    /// Uncontended one-hop delay of a data frame, used to seed link estimates.
    pub fn nominal_etd_us(&self) -> u64 {
        self.unicast_exchange_us(self.data_bytes)
    }

    /// Initial contention window of a MAC priority class.
    pub fn cw_for_class(&self, class: Option<u8>) -> u32 {
        let cw = match class {
            None => self.cw_min,
            Some(c) => self.cw_min << c,
        };
        cw.min(self.cw_max)
    }
}
