//! Run configuration and validation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::backoff::BackoffConfigError;
use crate::phy::{PhyError, RateOverride, RuLayout, RuTones};
use crate::scheduler::{SchedulerError, SchedulerPolicy};
use crate::Nanos;

/// Sentinel MU EDCA timer meaning "valid for the whole run".
pub const MU_EDCA_TIMER_WHOLE_RUN_US: u64 = u64::MAX;

/// Complete description of one simulation run. All defaults follow the
/// reference experiment setup: 5 GHz, MCS 8, 0.8 µs guard interval, 2080 µs
/// TXOP, OCW 31/127, 124 µs AP access-request interval, 1700-byte payloads
/// generated every quarter TXOP, 15 s of simulated time.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub bandwidth_mhz: u16,
    pub ru_tones: RuTones,
    pub mcs_index: u8,
    /// Guard interval in nanoseconds (800 = 0.8 µs).
    pub gi_ns: u32,
    pub txop_us: u32,
    pub beacon_interval_us: u64,
    pub eocw_min: u8,
    pub eocw_max: u8,
    pub access_req_interval_us: u32,
    pub payload_bytes: u32,
    pub packet_interval_us: u32,
    pub n_stas: u16,
    /// RA RUs per BSRP trigger frame.
    pub n_ra: usize,
    pub sim_duration_us: u64,
    pub sifs_us: u32,
    pub seed: u64,
    /// RA RUs per Basic trigger frame (data random access).
    pub n_ra_basic: usize,
    pub allow_stale_allocation: bool,
    /// When set, the lowest-AID transmitter on a contested RU is captured
    /// and decoded; everyone else on the RU still fails.
    pub capture_enabled: bool,
    pub mu_edca_aifsn: u8,
    pub mu_edca_timer_us: u64,
    // Duration-model constants. The protocol description leaves these open;
    // they are fixed, documented defaults rather than hidden magic.
    pub preamble_us: u32,
    pub legacy_preamble_us: u32,
    pub basic_rate_mbps: u32,
    pub mpdu_overhead_bytes: u32,
    pub bsr_frame_bytes: u32,
    pub tf_base_bytes: u32,
    pub tf_per_alloc_bytes: u32,
    pub ba_base_bytes: u32,
    pub ba_per_sta_bytes: u32,
    pub beacon_bytes: u32,
    pub rate_overrides: Vec<RateOverride>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            bandwidth_mhz: 20,
            ru_tones: RuTones::Tones26,
            mcs_index: 8,
            gi_ns: 800,
            txop_us: 2_080,
            beacon_interval_us: 204_800,
            eocw_min: 5,
            eocw_max: 7,
            access_req_interval_us: 124,
            payload_bytes: 1_700,
            packet_interval_us: 520, // one quarter of the TXOP
            n_stas: 9,
            n_ra: 9,
            sim_duration_us: 15_000_000,
            sifs_us: 16,
            seed: 1,
            n_ra_basic: 0,
            allow_stale_allocation: true,
            capture_enabled: false,
            mu_edca_aifsn: 0,
            mu_edca_timer_us: MU_EDCA_TIMER_WHOLE_RUN_US,
            preamble_us: 40,
            legacy_preamble_us: 20,
            basic_rate_mbps: 24,
            mpdu_overhead_bytes: 34,
            bsr_frame_bytes: 40,
            tf_base_bytes: 28,
            tf_per_alloc_bytes: 5,
            ba_base_bytes: 22,
            ba_per_sta_bytes: 8,
            beacon_bytes: 128,
            rate_overrides: Vec::new(),
        }
    }
}

impl SimConfig {
    pub fn layout(&self) -> Result<RuLayout, PhyError> {
        RuLayout::new(self.bandwidth_mhz, self.ru_tones)
    }

    pub fn scheduler_policy(&self) -> SchedulerPolicy {
        SchedulerPolicy {
            n_ra_bsrp: self.n_ra,
            n_ra_basic: self.n_ra_basic,
            allow_stale_allocation: self.allow_stale_allocation,
        }
    }

    /// Constant-bit-rate offered load per station, in bits/µs (= Mbps).
    pub fn offered_load_per_sta(&self) -> f64 {
        if self.packet_interval_us == 0 {
            return 0.0;
        }
        self.payload_bytes as f64 * 8.0 / self.packet_interval_us as f64
    }

    pub fn sim_duration_ns(&self) -> Nanos {
        crate::us_to_ns(self.sim_duration_us)
    }

    pub fn mu_edca_timer_ns(&self) -> Nanos {
        if self.mu_edca_timer_us == MU_EDCA_TIMER_WHOLE_RUN_US {
            Nanos::MAX
        } else {
            crate::us_to_ns(self.mu_edca_timer_us)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Phy(PhyError),
    Scheduler(SchedulerError),
    Backoff(BackoffConfigError),
    /// More BSRP RA RUs requested than the layout holds.
    NRaExceedsLayout { n_ra: usize, layout_count: usize },
    ZeroPacketInterval,
    ZeroSimDuration,
    TooManyStations(u16),
    /// One data MPDU does not fit the TXOP data window.
    PayloadExceedsDataWindow { needed_ns: Nanos, window_ns: Nanos },
    /// The engine cannot model station-side EDCA contention; the MU EDCA
    /// configuration must disable it for the whole run.
    EdcaContentionRequired,
    /// A scripted-scenario override references something that is not there.
    InvalidScript(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Phy(e) => write!(f, "{e}"),
            ConfigError::Scheduler(e) => write!(f, "{e}"),
            ConfigError::Backoff(e) => write!(f, "{e}"),
            ConfigError::NRaExceedsLayout { n_ra, layout_count } => {
                write!(f, "n_ra {n_ra} exceeds the {layout_count}-RU layout")
            }
            ConfigError::ZeroPacketInterval => write!(f, "packet_interval_us must be positive"),
            ConfigError::ZeroSimDuration => write!(f, "sim_duration_us must be positive"),
            ConfigError::TooManyStations(n) => write!(f, "n_stas {n} exceeds the AID space"),
            ConfigError::PayloadExceedsDataWindow { needed_ns, window_ns } => write!(
                f,
                "one MPDU needs {needed_ns} ns but the TXOP data window is {window_ns} ns"
            ),
            ConfigError::EdcaContentionRequired => write!(
                f,
                "configuration would require station-side EDCA contention, which is not modeled \
                 (need mu_edca_aifsn = 0 and a timer covering the whole run)"
            ),
            ConfigError::InvalidScript(reason) => write!(f, "invalid script: {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConfigError {}

impl From<PhyError> for ConfigError {
    fn from(e: PhyError) -> Self {
        ConfigError::Phy(e)
    }
}

impl From<SchedulerError> for ConfigError {
    fn from(e: SchedulerError) -> Self {
        ConfigError::Scheduler(e)
    }
}

impl From<BackoffConfigError> for ConfigError {
    fn from(e: BackoffConfigError) -> Self {
        ConfigError::Backoff(e)
    }
}
