//! Per-run counters. Everything here is integer-valued and event-derived,
//! so two runs of the same (config, seed) produce bit-identical metrics.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{Aid, Nanos};

/// Where the simulated airtime went. The components sum exactly to the run
/// duration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AirtimeBreakdown {
    pub access_gap_ns: Nanos,
    pub beacon_ns: Nanos,
    pub tf_ns: Nanos,
    pub bsr_phase_ns: Nanos,
    pub data_phase_ns: Nanos,
    pub ba_ns: Nanos,
    pub sifs_ns: Nanos,
}

impl AirtimeBreakdown {
    pub fn total_ns(&self) -> Nanos {
        self.access_gap_ns
            + self.beacon_ns
            + self.tf_ns
            + self.bsr_phase_ns
            + self.data_phase_ns
            + self.ba_ns
            + self.sifs_ns
    }
}

/// Random-access RU statistics for one phase type (BSRP or Basic triggers).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RaPhaseStats {
    /// RA RUs advertised across all trigger frames of this type.
    pub ra_rus_offered: u64,
    /// RA RUs with exactly one transmitter.
    pub success_rus: u64,
    /// RA RUs with two or more transmitters.
    pub collision_rus: u64,
    /// RA RUs nobody selected.
    pub idle_rus: u64,
    /// Histogram: number of trigger frames by their RA success count.
    pub per_tf_success_counts: BTreeMap<u32, u64>,
}

impl RaPhaseStats {
    pub fn tf_count(&self) -> u64 {
        self.per_tf_success_counts.values().sum()
    }

    fn rate(&self, part: u64) -> f64 {
        if self.ra_rus_offered == 0 {
            0.0
        } else {
            part as f64 / self.ra_rus_offered as f64
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.rate(self.success_rus)
    }

    pub fn collision_rate(&self) -> f64 {
        self.rate(self.collision_rus)
    }

    pub fn idle_rate(&self) -> f64 {
        self.rate(self.idle_rus)
    }

    /// Mean RA successes per trigger frame of this type.
    pub fn mean_successes_per_tf(&self) -> f64 {
        let tfs = self.tf_count();
        if tfs == 0 {
            return 0.0;
        }
        let total: u64 = self.per_tf_success_counts.iter().map(|(&k, &n)| k as u64 * n).sum();
        total as f64 / tfs as f64
    }

    /// Sample standard deviation of the per-TF success count.
    pub fn stddev_successes_per_tf(&self) -> f64 {
        let tfs = self.tf_count();
        if tfs < 2 {
            return 0.0;
        }
        let mean = self.mean_successes_per_tf();
        let ss: f64 = self
            .per_tf_success_counts
            .iter()
            .map(|(&k, &n)| {
                let d = k as f64 - mean;
                n as f64 * d * d
            })
            .sum();
        crate::numeric::sqrt(ss / (tfs - 1) as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StaMetrics {
    pub aid: Aid,
    pub generated_bytes: u64,
    pub generated_mpdus: u64,
    pub delivered_bytes: u64,
    pub delivered_mpdus: u64,
    pub sa_grants: u64,
    pub ra_attempts: u64,
    pub ra_successes: u64,
    pub sum_delay_ns: u64,
    pub delay_samples: u64,
}

impl StaMetrics {
    pub fn mean_delay_us(&self) -> f64 {
        if self.delay_samples == 0 {
            0.0
        } else {
            self.sum_delay_ns as f64 / self.delay_samples as f64 / 1000.0
        }
    }
}

/// Complete result of one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Time of the last completed exchange; cycles in flight when the
    /// configured duration expires run to completion.
    pub duration_ns: Nanos,
    pub cycles: u64,
    pub bsrp_tf_count: u64,
    pub basic_tf_count: u64,
    pub beacon_count: u64,
    pub generated_bytes: u64,
    pub generated_mpdus: u64,
    pub delivered_bytes: u64,
    pub delivered_mpdus: u64,
    pub sa_grants: u64,
    /// RUs left without allocation in emitted trigger frames.
    pub unallocated_rus: u64,
    /// RUs unused (collided/idle) in a BSR phase and put back to work by
    /// the following Basic trigger.
    pub rescheduled_unused_rus: u64,
    pub bsrp_ra: RaPhaseStats,
    pub basic_ra: RaPhaseStats,
    pub airtime: AirtimeBreakdown,
    pub per_sta: Vec<StaMetrics>,
}

impl Metrics {
    /// Aggregate application-level throughput in bits/µs (numerically equal
    /// to Mbps).
    pub fn throughput_mbps(&self) -> f64 {
        if self.duration_ns == 0 {
            return 0.0;
        }
        self.delivered_bytes as f64 * 8.0 / (self.duration_ns as f64 / 1000.0)
    }

    /// Mean head-of-line delay over all delivered MPDUs, in µs.
    pub fn mean_delay_us(&self) -> f64 {
        let samples: u64 = self.per_sta.iter().map(|s| s.delay_samples).sum();
        if samples == 0 {
            return 0.0;
        }
        let sum: u64 = self.per_sta.iter().map(|s| s.sum_delay_ns).sum();
        sum as f64 / samples as f64 / 1000.0
    }

    pub fn sta(&self, aid: Aid) -> Option<&StaMetrics> {
        self.per_sta.iter().find(|s| s.aid == aid)
    }
}
