//! Per-station UORA contention state machine.
//!
//! A station keeps an OFDMA contention window `OCW` and an OFDMA back-off
//! counter `OBO`. On joining contention it sets `OCW = 2^EOCWmin - 1` and
//! draws `OBO` uniformly from `[0, OCW]`. Each received trigger frame with
//! `n_ra` random-access RUs either makes the station eligible (when
//! `OBO <= n_ra`, zeroing the counter) or decrements the counter by `n_ra`.
//! An eligible station picks one of the advertised RA RUs uniformly. After
//! an acknowledged transmission the window resets to `2^EOCWmin - 1`; after
//! a failed one it grows as `2·OCW + 1`, capped at `2^EOCWmax - 1`, which
//! keeps the window of the form `2^k - 1` throughout.

use core::fmt;

use rand::Rng;

/// Invalid EOCW configuration handed to [`UoraState::initialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackoffConfigError {
    pub eocw_min: u8,
    pub eocw_max: u8,
}

impl fmt::Display for BackoffConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid EOCW range: eocw_min={} eocw_max={} (need 0 <= min <= max <= 7)",
            self.eocw_min, self.eocw_max
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BackoffConfigError {}

/// Outcome of processing one trigger frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerDecision {
    /// Eligible: the station transmits on a randomly selected RA RU.
    Transmit,
    /// Not eligible this trigger frame.
    Defer,
}

/// OFDMA contention state of one station.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UoraState {
    eocw_min: u8,
    eocw_max: u8,
    ocw: u16,
    obo: u16,
}

impl UoraState {
    /// Starts contention: `OCW = 2^eocw_min - 1`, `OBO` uniform on `[0, OCW]`.
    pub fn initialize<R: Rng + ?Sized>(
        eocw_min: u8,
        eocw_max: u8,
        rng: &mut R,
    ) -> Result<Self, BackoffConfigError> {
        if eocw_min > eocw_max || eocw_max > 7 {
            return Err(BackoffConfigError { eocw_min, eocw_max });
        }
        let ocw = (1u16 << eocw_min) - 1;
        let obo = draw_obo(ocw, rng);
        Ok(Self { eocw_min, eocw_max, ocw, obo })
    }

    pub fn ocw(&self) -> u16 {
        self.ocw
    }

    pub fn obo(&self) -> u16 {
        self.obo
    }

    pub fn ocw_min(&self) -> u16 {
        (1u16 << self.eocw_min) - 1
    }

    pub fn ocw_max(&self) -> u16 {
        (1u16 << self.eocw_max) - 1
    }

    /// Overrides the back-off counter. Scripted-scenario hook; the protocol
    /// itself never sets OBO directly.
    pub fn force_obo(&mut self, obo: u16) {
        self.obo = obo;
    }

    /// Applies a received trigger frame advertising `n_ra` RA RUs.
    ///
    /// Eligibility is compare-then-zero: `OBO <= n_ra` transmits (counter
    /// zeroed), otherwise the counter drops by `n_ra`. A trigger without RA
    /// RUs leaves the state untouched.
    pub fn process_trigger(&mut self, n_ra: usize) -> TriggerDecision {
        if n_ra == 0 {
            return TriggerDecision::Defer;
        }
        let n_ra = n_ra.min(u16::MAX as usize) as u16;
        if self.obo <= n_ra {
            self.obo = 0;
            TriggerDecision::Transmit
        } else {
            self.obo -= n_ra;
            TriggerDecision::Defer
        }
    }

    /// Picks one of the advertised RA RUs uniformly at random.
    ///
    /// # Panics
    ///
    /// Panics if `ra_ru_indices` is empty; callers only reach this after a
    /// [`TriggerDecision::Transmit`], which requires at least one RA RU.
    pub fn select_ra_ru<R: Rng + ?Sized>(&self, ra_ru_indices: &[u8], rng: &mut R) -> u8 {
        assert!(!ra_ru_indices.is_empty(), "RA RU selection from an empty list");
        ra_ru_indices[rng.gen_range(0..ra_ru_indices.len())]
    }

    /// Acknowledged RA transmission: window back to `OCW_MIN`, fresh draw.
    pub fn on_success<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.ocw = self.ocw_min();
        self.obo = draw_obo(self.ocw, rng);
    }

    /// Failed RA transmission: window doubles (`2·OCW + 1`, staying of the
    /// form `2^k - 1`) up to `OCW_MAX`, fresh draw.
    pub fn on_failure<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.ocw = (2 * self.ocw + 1).min(self.ocw_max());
        self.obo = draw_obo(self.ocw, rng);
    }
}

fn draw_obo<R: Rng + ?Sized>(ocw: u16, rng: &mut R) -> u16 {
    rng.gen_range(0..=ocw)
}
