//! RU geometry, PHY rates, frame durations and per-RU reception resolution.
//!
//! The channel model is deliberately error-free: all stations are in range
//! and transmit at sufficient power, so the only loss mechanism is two or
//! more stations picking the same RU. Durations follow plain OFDM symbol
//! arithmetic — a fixed preamble plus whole symbols at the (RU size, MCS,
//! guard interval) data rate — on integer nanoseconds throughout, so airtime
//! accounting is exact.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::numeric::ceil_pos;
use crate::{Aid, Nanos};

/// OFDM symbol payload portion, excluding the guard interval (12.8 µs).
pub const SYMBOL_BASE_NS: Nanos = 12_800;

/// Supported guard intervals, in nanoseconds.
pub const SUPPORTED_GI_NS: [u32; 3] = [800, 1_600, 3_200];

/// Legacy (non-HE) preamble used for full-bandwidth control frames.
pub const DEFAULT_LEGACY_PREAMBLE_NS: Nanos = 20_000;

/// Legacy OFDM symbol duration for control frames.
pub const LEGACY_SYMBOL_NS: Nanos = 4_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhyError {
    /// No RU geometry defined for this (bandwidth, RU size) pair.
    UnsupportedGeometry { bandwidth_mhz: u16, ru_tones: u16 },
    UnsupportedBandwidth(u16),
    UnknownMcs(u8),
    UnsupportedGi(u32),
    /// A rate-table override line failed to parse.
    BadOverride { line: usize, reason: String },
}

impl fmt::Display for PhyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhyError::UnsupportedGeometry { bandwidth_mhz, ru_tones } => {
                write!(f, "no RU geometry for {ru_tones}-tone RUs in {bandwidth_mhz} MHz")
            }
            PhyError::UnsupportedBandwidth(bw) => write!(f, "unsupported bandwidth {bw} MHz"),
            PhyError::UnknownMcs(mcs) => write!(f, "unknown MCS index {mcs}"),
            PhyError::UnsupportedGi(gi) => write!(f, "unsupported guard interval {gi} ns"),
            PhyError::BadOverride { line, reason } => {
                write!(f, "rate override line {line}: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PhyError {}

/// RU sizes modeled by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuTones {
    Tones26,
    Tones52,
    Tones106,
    Tones242,
}

impl RuTones {
    pub const ALL: [RuTones; 4] =
        [RuTones::Tones26, RuTones::Tones52, RuTones::Tones106, RuTones::Tones242];

    pub fn tone_count(self) -> u16 {
        match self {
            RuTones::Tones26 => 26,
            RuTones::Tones52 => 52,
            RuTones::Tones106 => 106,
            RuTones::Tones242 => 242,
        }
    }

    /// Data (non-pilot) subcarriers per RU.
    pub fn data_subcarriers(self) -> u32 {
        match self {
            RuTones::Tones26 => 24,
            RuTones::Tones52 => 48,
            RuTones::Tones106 => 102,
            RuTones::Tones242 => 234,
        }
    }

    pub fn wire_code(self) -> u8 {
        match self {
            RuTones::Tones26 => 0,
            RuTones::Tones52 => 1,
            RuTones::Tones106 => 2,
            RuTones::Tones242 => 3,
        }
    }

    pub fn from_wire_code(code: u8) -> Result<Self, u8> {
        match code {
            0 => Ok(RuTones::Tones26),
            1 => Ok(RuTones::Tones52),
            2 => Ok(RuTones::Tones106),
            3 => Ok(RuTones::Tones242),
            other => Err(other),
        }
    }

    pub fn from_tone_count(tones: u16) -> Option<Self> {
        match tones {
            26 => Some(RuTones::Tones26),
            52 => Some(RuTones::Tones52),
            106 => Some(RuTones::Tones106),
            242 => Some(RuTones::Tones242),
            _ => None,
        }
    }
}

impl fmt::Display for RuTones {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-tone", self.tone_count())
    }
}

/// Equal-size RU partition of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuLayout {
    bandwidth_mhz: u16,
    ru_tones: RuTones,
    count: usize,
}

impl RuLayout {
    /// Looks up the validated geometry table.
    pub fn new(bandwidth_mhz: u16, ru_tones: RuTones) -> Result<Self, PhyError> {
        let count = match (bandwidth_mhz, ru_tones) {
            (20, RuTones::Tones26) => 9,
            (20, RuTones::Tones52) => 4,
            (20, RuTones::Tones106) => 2,
            (20, RuTones::Tones242) => 1,
            (40, RuTones::Tones26) => 18,
            (40, RuTones::Tones52) => 8,
            (40, RuTones::Tones106) => 4,
            (40, RuTones::Tones242) => 2,
            (80, RuTones::Tones26) => 37,
            (80, RuTones::Tones52) => 16,
            (80, RuTones::Tones106) => 8,
            (80, RuTones::Tones242) => 4,
            (160, RuTones::Tones26) => 74,
            (160, RuTones::Tones52) => 32,
            (160, RuTones::Tones106) => 16,
            (160, RuTones::Tones242) => 8,
            (bw, tones) => {
                return if matches!(bw, 20 | 40 | 80 | 160) {
                    Err(PhyError::UnsupportedGeometry {
                        bandwidth_mhz: bw,
                        ru_tones: tones.tone_count(),
                    })
                } else {
                    Err(PhyError::UnsupportedBandwidth(bw))
                };
            }
        };
        Ok(Self { bandwidth_mhz, ru_tones, count })
    }

    pub fn bandwidth_mhz(&self) -> u16 {
        self.bandwidth_mhz
    }

    pub fn ru_tones(&self) -> RuTones {
        self.ru_tones
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Modulation bits per subcarrier and coding rate for one MCS index.
fn mcs_profile(mcs: u8) -> Result<(u32, u32, u32), PhyError> {
    // (bits per subcarrier, coding numerator, coding denominator)
    let profile = match mcs {
        0 => (1, 1, 2),
        1 => (2, 1, 2),
        2 => (2, 3, 4),
        3 => (4, 1, 2),
        4 => (4, 3, 4),
        5 => (6, 2, 3),
        6 => (6, 3, 4),
        7 => (6, 5, 6),
        8 => (8, 3, 4),
        9 => (8, 5, 6),
        10 => (10, 3, 4),
        11 => (10, 5, 6),
        _ => return Err(PhyError::UnknownMcs(mcs)),
    };
    Ok(profile)
}

/// One resolved (RU size, MCS, guard interval) rate entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEntry {
    /// Data rate in bits per microsecond.
    pub bits_per_us: f64,
    /// Information bits carried by one OFDM symbol.
    pub bits_per_symbol: f64,
    /// Symbol duration including the guard interval.
    pub symbol_ns: Nanos,
}

/// Rate override parsed from one `ru_tones,mcs,gi_us,bits_per_us` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOverride {
    pub ru_tones: RuTones,
    pub mcs: u8,
    pub gi_ns: u32,
    pub bits_per_us: f64,
}

/// Maps (RU size, MCS, guard interval) to a data rate. Entries follow the
/// closed form `data_subcarriers × bits_per_subcarrier × coding_rate /
/// (12.8 µs + GI)` unless overridden.
#[derive(Debug, Clone, Default)]
pub struct RateTable {
    overrides: BTreeMap<(RuTones, u8, u32), f64>,
}

impl RateTable {
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn with_overrides(overrides: &[RateOverride]) -> Self {
        let mut table = Self::default();
        for ov in overrides {
            table.overrides.insert((ov.ru_tones, ov.mcs, ov.gi_ns), ov.bits_per_us);
        }
        table
    }

    /// Parses the line-oriented override format: one
    /// `ru_tones,mcs,gi_us,bits_per_us` record per line; blank lines and
    /// `#` comments are skipped.
    pub fn parse_overrides(text: &str) -> Result<Vec<RateOverride>, PhyError> {
        let mut out = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(PhyError::BadOverride {
                    line,
                    reason: String::from("expected 4 comma-separated fields"),
                });
            }
            let bad = |reason: &str| PhyError::BadOverride { line, reason: String::from(reason) };
            let tones: u16 = fields[0].parse().map_err(|_| bad("ru_tones not an integer"))?;
            let ru_tones = RuTones::from_tone_count(tones).ok_or_else(|| bad("unknown RU size"))?;
            let mcs: u8 = fields[1].parse().map_err(|_| bad("mcs not an integer"))?;
            let gi_us: f64 = fields[2].parse().map_err(|_| bad("gi_us not a number"))?;
            let gi_ns = (gi_us * 1000.0) as u32;
            if !SUPPORTED_GI_NS.contains(&gi_ns) {
                return Err(bad("gi_us must be 0.8, 1.6 or 3.2"));
            }
            let bits_per_us: f64 = fields[3].parse().map_err(|_| bad("bits_per_us not a number"))?;
            if bits_per_us.is_nan() || bits_per_us <= 0.0 {
                return Err(bad("bits_per_us must be positive"));
            }
            out.push(RateOverride { ru_tones, mcs, gi_ns, bits_per_us });
        }
        Ok(out)
    }

    /// Resolves one rate entry; errors on unknown MCS or guard interval.
    pub fn rate(&self, ru_tones: RuTones, mcs: u8, gi_ns: u32) -> Result<RateEntry, PhyError> {
        if !SUPPORTED_GI_NS.contains(&gi_ns) {
            return Err(PhyError::UnsupportedGi(gi_ns));
        }
        let symbol_ns = SYMBOL_BASE_NS + gi_ns as Nanos;
        let symbol_us = symbol_ns as f64 / 1000.0;
        if let Some(&bits_per_us) = self.overrides.get(&(ru_tones, mcs, gi_ns)) {
            return Ok(RateEntry { bits_per_us, bits_per_symbol: bits_per_us * symbol_us, symbol_ns });
        }
        let (bits_per_sc, num, den) = mcs_profile(mcs)?;
        // Integer for every standard MCS (subcarrier counts divide evenly),
        // which keeps symbol counts exact in f64.
        let bits_per_symbol = (ru_tones.data_subcarriers() * bits_per_sc * num) as f64 / den as f64;
        Ok(RateEntry { bits_per_us: bits_per_symbol / symbol_us, bits_per_symbol, symbol_ns })
    }

    /// Airtime of one uplink PPDU: preamble plus whole symbols.
    pub fn frame_duration(
        &self,
        payload_bytes: u32,
        ru_tones: RuTones,
        mcs: u8,
        gi_ns: u32,
        preamble_ns: Nanos,
    ) -> Result<Nanos, PhyError> {
        let entry = self.rate(ru_tones, mcs, gi_ns)?;
        Ok(preamble_ns + ppdu_symbols(payload_bytes, entry.bits_per_symbol) * entry.symbol_ns)
    }
}

/// Whole OFDM symbols needed for `payload_bytes` at `bits_per_symbol`.
pub fn ppdu_symbols(payload_bytes: u32, bits_per_symbol: f64) -> u64 {
    if payload_bytes == 0 {
        return 0;
    }
    ceil_pos(payload_bytes as f64 * 8.0 / bits_per_symbol)
}

/// Airtime of a full-bandwidth control frame (trigger, Block Ack, beacon)
/// sent at a legacy basic rate.
pub fn control_frame_duration_ns(
    frame_bytes: u32,
    basic_rate_mbps: u32,
    legacy_preamble_ns: Nanos,
) -> Nanos {
    let bits_per_symbol = basic_rate_mbps as u64 * LEGACY_SYMBOL_NS / 1000;
    let bits = frame_bytes as u64 * 8;
    legacy_preamble_ns + bits.div_ceil(bits_per_symbol.max(1)) * LEGACY_SYMBOL_NS
}

/// Reception outcome of one RU after a solicited uplink phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuOutcome {
    /// Nobody transmitted on this RU.
    Idle,
    /// Exactly one station transmitted and was decoded.
    Success(Aid),
    /// Two or more stations transmitted; all of them failed (equal-power
    /// interference defeats decoding). AIDs are sorted ascending.
    Collision(Vec<Aid>),
}

impl RuOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RuOutcome::Success(_))
    }
}

/// Resolves which transmissions were decodable, RU by RU.
///
/// Returns one outcome per RU index in `0..ru_count`; outcomes are a pure
/// function of the transmission set (order does not matter).
///
/// # Panics
///
/// Panics if a station appears twice or an RU index is out of range; both
/// indicate a bug in the caller.
pub fn resolve_reception(transmissions: &[(Aid, usize)], ru_count: usize) -> Vec<RuOutcome> {
    let mut per_ru: Vec<Vec<Aid>> = vec![Vec::new(); ru_count];
    let mut seen: Vec<Aid> = Vec::with_capacity(transmissions.len());
    for &(aid, ru_index) in transmissions {
        assert!(ru_index < ru_count, "RU index {ru_index} outside layout of {ru_count}");
        assert!(!seen.contains(&aid), "duplicate transmitter AID {aid}");
        seen.push(aid);
        per_ru[ru_index].push(aid);
    }
    per_ru
        .into_iter()
        .map(|mut aids| match aids.len() {
            0 => RuOutcome::Idle,
            1 => RuOutcome::Success(aids[0]),
            _ => {
                aids.sort_unstable();
                RuOutcome::Collision(aids)
            }
        })
        .collect()
}

/// Common padded airtime of a synchronized uplink phase: every participant
/// is charged the duration of the longest transmission.
///
/// # Panics
///
/// Panics on an empty set; a phase with no participants has no duration.
pub fn pad_to_longest(durations: &[Nanos]) -> Nanos {
    assert!(!durations.is_empty(), "pad_to_longest over an empty set");
    durations.iter().copied().max().unwrap()
}
