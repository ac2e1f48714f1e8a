//! Scripted-scenario overrides.
//!
//! Validation scenarios need to pin outcomes that are normally random: the
//! initial back-off counters, which RA RU an eligible station picks, what
//! the AP already knows, where its round-robin cursor starts. A [`Script`]
//! carries those overrides into a run without touching the protocol logic —
//! forced values are injected exactly where the random draw would happen.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::Aid;

#[derive(Debug, Clone, Default)]
pub struct Script {
    /// Overrides the first drawn OBO value per station.
    pub forced_initial_obo: BTreeMap<Aid, u16>,
    /// Overrides RA RU selections per station, consumed in order. Values
    /// are absolute RU indices and must be RA RUs of the trigger in effect.
    pub forced_ru_choice: BTreeMap<Aid, Vec<u8>>,
    /// Buffer statuses the AP starts out knowing (marked stale).
    pub preknown_status: Vec<(Aid, u32)>,
    /// Starts the AP round-robin cursor at this station.
    pub cursor_start: Option<Aid>,
    /// Stations that generate no traffic.
    pub silent_stas: BTreeSet<Aid>,
    /// Forces every contending station eligible on each BSRP trigger by
    /// zeroing its OBO before the trigger is processed.
    pub force_all_eligible: bool,
    /// Emits BSRP triggers with exactly this many RA RUs and nothing else
    /// (remaining RUs stay unallocated instead of becoming polling slots).
    pub bsrp_ra_only: Option<usize>,
    /// Stops the run after this many cycles even if simulated time remains.
    pub max_cycles: Option<u64>,
}

impl Script {
    pub fn is_default(&self) -> bool {
        self.forced_initial_obo.is_empty()
            && self.forced_ru_choice.is_empty()
            && self.preknown_status.is_empty()
            && self.cursor_start.is_none()
            && self.silent_stas.is_empty()
            && !self.force_all_eligible
            && self.bsrp_ra_only.is_none()
            && self.max_cycles.is_none()
    }
}
