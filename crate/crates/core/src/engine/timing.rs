//! The shared duration model.
//!
//! Both the event engine and the analytic throughput estimator price frames
//! through this one structure, so a disagreement between them can only come
//! from protocol dynamics, never from duration arithmetic.

use crate::phy::{control_frame_duration_ns, ppdu_symbols, RateEntry, RateTable, RuLayout};
use crate::wire::{MAX_UL_LENGTH_US, UL_LENGTH_UNIT_US};
use crate::{us_to_ns, Nanos};

use super::config::{ConfigError, SimConfig};

#[derive(Debug, Clone)]
pub struct DurationModel {
    layout: RuLayout,
    rate: RateEntry,
    preamble_ns: Nanos,
    legacy_preamble_ns: Nanos,
    basic_rate_mbps: u32,
    sifs_ns: Nanos,
    gap_ns: Nanos,
    txop_ns: Nanos,
    payload_bytes: u32,
    mpdu_overhead_bytes: u32,
    bsr_frame_bytes: u32,
    tf_base_bytes: u32,
    tf_per_alloc_bytes: u32,
    ba_base_bytes: u32,
    ba_per_sta_bytes: u32,
    beacon_bytes: u32,
}

impl DurationModel {
    pub fn from_config(cfg: &SimConfig) -> Result<Self, ConfigError> {
        let layout = cfg.layout()?;
        let table = RateTable::with_overrides(&cfg.rate_overrides);
        let rate = table.rate(cfg.ru_tones, cfg.mcs_index, cfg.gi_ns)?;
        Ok(Self {
            layout,
            rate,
            preamble_ns: us_to_ns(cfg.preamble_us as u64),
            legacy_preamble_ns: us_to_ns(cfg.legacy_preamble_us as u64),
            basic_rate_mbps: cfg.basic_rate_mbps,
            sifs_ns: us_to_ns(cfg.sifs_us as u64),
            gap_ns: us_to_ns(cfg.access_req_interval_us as u64),
            txop_ns: us_to_ns(cfg.txop_us as u64),
            payload_bytes: cfg.payload_bytes,
            mpdu_overhead_bytes: cfg.mpdu_overhead_bytes,
            bsr_frame_bytes: cfg.bsr_frame_bytes,
            tf_base_bytes: cfg.tf_base_bytes,
            tf_per_alloc_bytes: cfg.tf_per_alloc_bytes,
            ba_base_bytes: cfg.ba_base_bytes,
            ba_per_sta_bytes: cfg.ba_per_sta_bytes,
            beacon_bytes: cfg.beacon_bytes,
        })
    }

    pub fn layout(&self) -> &RuLayout {
        &self.layout
    }

    pub fn sifs_ns(&self) -> Nanos {
        self.sifs_ns
    }

    pub fn access_gap_ns(&self) -> Nanos {
        self.gap_ns
    }

    /// Airtime of an uplink PPDU carrying `on_air_bytes` on one RU.
    pub fn ppdu_ns(&self, on_air_bytes: u32) -> Nanos {
        self.preamble_ns + ppdu_symbols(on_air_bytes, self.rate.bits_per_symbol) * self.rate.symbol_ns
    }

    /// On-air bytes of an aggregate of `mpdus` data MPDUs.
    pub fn burst_bytes(&self, mpdus: u32) -> u32 {
        mpdus.saturating_mul(self.payload_bytes.saturating_add(self.mpdu_overhead_bytes))
    }

    /// Airtime of `mpdus` aggregated data MPDUs.
    pub fn data_burst_ns(&self, mpdus: u32) -> Nanos {
        self.ppdu_ns(self.burst_bytes(mpdus))
    }

    pub fn tf_ns(&self, n_allocations: usize) -> Nanos {
        let bytes = self.tf_base_bytes + self.tf_per_alloc_bytes * n_allocations as u32;
        control_frame_duration_ns(bytes, self.basic_rate_mbps, self.legacy_preamble_ns)
    }

    pub fn ba_ns(&self, n_acked: usize) -> Nanos {
        let bytes = self.ba_base_bytes + self.ba_per_sta_bytes * n_acked as u32;
        control_frame_duration_ns(bytes, self.basic_rate_mbps, self.legacy_preamble_ns)
    }

    pub fn beacon_ns(&self) -> Nanos {
        control_frame_duration_ns(self.beacon_bytes, self.basic_rate_mbps, self.legacy_preamble_ns)
    }

    /// UL length solicited for the BSR phase: one status report PPDU,
    /// rounded up to the trigger frame's 16 µs granularity.
    pub fn bsr_phase_ul_us(&self) -> u32 {
        self.round_ul_us(self.ppdu_ns(self.bsr_frame_bytes))
    }

    /// TXOP budget left for the data PPDU once the Basic trigger, the Block
    /// Ack and the two framing SIFS are paid for (both sized for a fully
    /// allocated layout, keeping the window independent of per-cycle state).
    pub fn data_window_ns(&self) -> Nanos {
        let overhead =
            self.tf_ns(self.layout.count()) + self.ba_ns(self.layout.count()) + 2 * self.sifs_ns;
        self.txop_ns.saturating_sub(overhead)
    }

    /// Largest aggregate that fits `window_ns`.
    pub fn max_mpdus_in(&self, window_ns: Nanos) -> u32 {
        let mut mpdus = 0u32;
        while mpdus < u16::MAX as u32 && self.data_burst_ns(mpdus + 1) <= window_ns {
            mpdus += 1;
        }
        mpdus
    }

    /// MPDUs needed to drain `queue_bytes`, capped by what fits the window.
    pub fn mpdus_for_bytes(&self, queue_bytes: u32, cap: u32) -> u32 {
        if self.payload_bytes == 0 || queue_bytes == 0 {
            return 0;
        }
        (queue_bytes.div_ceil(self.payload_bytes)).min(cap)
    }

    /// Rounds a needed duration up to the 16 µs UL-length granularity.
    pub fn round_ul_us(&self, needed_ns: Nanos) -> u32 {
        let units = needed_ns.div_ceil(us_to_ns(UL_LENGTH_UNIT_US as u64));
        (units as u32).saturating_mul(UL_LENGTH_UNIT_US).min(MAX_UL_LENGTH_US)
    }
}
