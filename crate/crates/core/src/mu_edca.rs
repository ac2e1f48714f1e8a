//! MU EDCA Parameter Set state per station.
//!
//! After taking part in an uplink OFDMA exchange a station applies the
//! alternate EDCA parameters announced by the AP for as long as the MU EDCA
//! timer is valid; every acknowledged OFDMA data transmission refreshes the
//! timer. An AIFSN of zero while the parameters are in force disables
//! EDCA-based contention entirely, which is exactly the regime this
//! simulator requires: legacy contention itself is not modeled, and
//! [`MuEdcaState::edca_enabled`] exists so the engine can reject
//! configurations that would need it.
//!
//! The alternate contention-window exponents are stored for completeness but
//! are otherwise unused (no EDCA back-off runs here).

use crate::Nanos;

/// Timer duration treated as "valid for the whole run".
pub const MU_EDCA_TIMER_INFINITE_NS: Nanos = Nanos::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuEdcaState {
    aifsn: u8,
    ecw_min: u8,
    ecw_max: u8,
    timer_duration_ns: Nanos,
    deadline_ns: Option<Nanos>,
}

impl MuEdcaState {
    /// State before any parameter set was received: inactive, defaults apply.
    pub fn new() -> Self {
        Self { aifsn: 0, ecw_min: 0, ecw_max: 0, timer_duration_ns: 0, deadline_ns: None }
    }

    /// Applies an announced parameter set at time `now`. A duration of
    /// [`MU_EDCA_TIMER_INFINITE_NS`] (or anything reaching past the run)
    /// keeps the parameters valid indefinitely.
    pub fn apply_parameters(
        &mut self,
        aifsn: u8,
        ecw_min: u8,
        ecw_max: u8,
        timer_duration_ns: Nanos,
        now: Nanos,
    ) {
        self.aifsn = aifsn;
        self.ecw_min = ecw_min;
        self.ecw_max = ecw_max;
        self.timer_duration_ns = timer_duration_ns;
        self.deadline_ns = Some(now.saturating_add(timer_duration_ns));
    }

    /// Refreshes the validity timer after an acknowledged OFDMA data
    /// transmission.
    pub fn on_ofdma_success(&mut self, now: Nanos) {
        if self.deadline_ns.is_some() {
            self.deadline_ns = Some(now.saturating_add(self.timer_duration_ns));
        }
    }

    /// Whether the announced parameters are currently in force.
    pub fn active(&self, now: Nanos) -> bool {
        matches!(self.deadline_ns, Some(deadline) if now < deadline)
    }

    /// False exactly while active parameters carry AIFSN 0; true otherwise
    /// (the station would fall back to its default EDCA settings).
    pub fn edca_enabled(&self, now: Nanos) -> bool {
        !(self.active(now) && self.aifsn == 0)
    }

    pub fn aifsn(&self) -> u8 {
        self.aifsn
    }

    pub fn deadline_ns(&self) -> Option<Nanos> {
        self.deadline_ns
    }
}

impl Default for MuEdcaState {
    fn default() -> Self {
        Self::new()
    }
}
