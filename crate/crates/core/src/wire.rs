//! Byte codecs for the protocol data units the simulator exchanges.
//!
//! Two formats are bit-exact protocol structures:
//!
//! * the UORA Parameter Set element — four octets `element id | length |
//!   element id extension | OCW range`, where the OCW range octet packs
//!   `EOCWmin` into bits 0–2, `EOCWmax` into bits 3–5 and leaves bits 6–7
//!   reserved (least-significant field first);
//! * trigger frames — a simulator-canonical layout (the standard's full
//!   Trigger frame octet format is out of scope): one octet variant
//!   (0 = BSRP, 1 = Basic), two octets UL length in 16 µs units
//!   (little-endian), one octet allocation count, then five octets per
//!   allocation (`ru_index`, RU tones code, AID little-endian).
//!
//! Buffer status reports and Multi-STA Block Acks get equally simple
//! canonical layouts so every PDU in the simulator can round-trip through
//! bytes. All codecs are pure value transformations: `decode(encode(x)) == x`
//! for every valid `x`, and distinct values encode to distinct bytes.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::phy::RuTones;
use crate::{Aid, MAX_AID, RA_AID, UNASSOCIATED_RA_AID};

/// Element ID used when none is configured. The element uses the
/// extension-framing structure; the registry value itself is configurable
/// because hardcoding a guessed number would be worse than a default.
pub const DEFAULT_ELEMENT_ID: u8 = 255;

/// Default Element ID Extension (configurable, see [`UoraParameterSet::with_ids`]).
pub const DEFAULT_ELEMENT_ID_EXTENSION: u8 = 0;

/// Encoded size of the UORA Parameter Set element: always four octets.
pub const UORA_PARAM_SET_WIRE_LEN: usize = 4;

/// Value of the element's length field (extension id + OCW range octet).
pub const UORA_PARAM_SET_LENGTH_FIELD: u8 = 2;

/// Granularity of the trigger frame UL length field.
pub const UL_LENGTH_UNIT_US: u32 = 16;

/// Largest UL length representable in the trigger frame (16 µs × 65535).
pub const MAX_UL_LENGTH_US: u32 = UL_LENGTH_UNIT_US * u16::MAX as u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireError {
    /// An EOCW exponent was outside 0..=7.
    EocwOutOfRange(u8),
    /// `eocw_min` exceeded `eocw_max`.
    EocwOrder { eocw_min: u8, eocw_max: u8 },
    /// Input shorter than the structure requires.
    Truncated { needed: usize, got: usize },
    /// Element length field was not [`UORA_PARAM_SET_LENGTH_FIELD`].
    BadLengthField(u8),
    /// Unknown trigger frame variant code.
    BadVariantCode(u8),
    /// Unknown RU tones code.
    BadTonesCode(u8),
    /// The same RU index appeared twice in one trigger frame.
    DuplicateRuIndex(u8),
    /// AID above the representable range.
    AidOutOfRange(u16),
    /// AID 2045 (unassociated-station random access) is not supported.
    UnassociatedAidUnsupported,
    /// A station-originated PDU carried the reserved AID 0.
    ZeroAid,
    /// Trigger frame byte length disagrees with its allocation count.
    LengthMismatch { expected: usize, got: usize },
    /// More allocations than the one-octet count field can carry.
    TooManyAllocations(usize),
    /// UL length not a multiple of [`UL_LENGTH_UNIT_US`] or out of range.
    BadUlLength(u32),
}

impl fmt::Display for WireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireError::EocwOutOfRange(v) => write!(f, "EOCW exponent {v} out of range 0..=7"),
            WireError::EocwOrder { eocw_min, eocw_max } => {
                write!(f, "eocw_min {eocw_min} exceeds eocw_max {eocw_max}")
            }
            WireError::Truncated { needed, got } => {
                write!(f, "truncated input: need {needed} octets, got {got}")
            }
            WireError::BadLengthField(v) => write!(f, "element length field {v}, expected 2"),
            WireError::BadVariantCode(v) => write!(f, "unknown trigger variant code {v}"),
            WireError::BadTonesCode(v) => write!(f, "unknown RU tones code {v}"),
            WireError::DuplicateRuIndex(v) => write!(f, "duplicate RU index {v}"),
            WireError::AidOutOfRange(v) => write!(f, "AID {v} out of range"),
            WireError::UnassociatedAidUnsupported => {
                write!(f, "AID 2045 (unassociated RA) is not supported")
            }
            WireError::ZeroAid => write!(f, "AID 0 is not a valid station identifier"),
            WireError::LengthMismatch { expected, got } => {
                write!(f, "frame length {got} does not match expected {expected}")
            }
            WireError::TooManyAllocations(n) => write!(f, "{n} allocations exceed count octet"),
            WireError::BadUlLength(v) => {
                write!(f, "UL length {v} µs not a multiple of 16 in range")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WireError {}

/// UORA Parameter Set element: advertises the EOCW range stations use to
/// derive `OCW_MIN = 2^EOCWmin - 1` and `OCW_MAX = 2^EOCWmax - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UoraParameterSet {
    element_id: u8,
    element_id_extension: u8,
    eocw_min: u8,
    eocw_max: u8,
    reserved: u8,
}

impl UoraParameterSet {
    /// Builds an element with the default element IDs and zero reserved bits.
    pub fn new(eocw_min: u8, eocw_max: u8) -> Result<Self, WireError> {
        Self::with_ids(DEFAULT_ELEMENT_ID, DEFAULT_ELEMENT_ID_EXTENSION, eocw_min, eocw_max)
    }

    /// Builds an element with explicit element id / extension id values.
    pub fn with_ids(
        element_id: u8,
        element_id_extension: u8,
        eocw_min: u8,
        eocw_max: u8,
    ) -> Result<Self, WireError> {
        if eocw_min > 7 {
            return Err(WireError::EocwOutOfRange(eocw_min));
        }
        if eocw_max > 7 {
            return Err(WireError::EocwOutOfRange(eocw_max));
        }
        if eocw_min > eocw_max {
            return Err(WireError::EocwOrder { eocw_min, eocw_max });
        }
        Ok(Self { element_id, element_id_extension, eocw_min, eocw_max, reserved: 0 })
    }

    pub fn element_id(&self) -> u8 {
        self.element_id
    }

    pub fn element_id_extension(&self) -> u8 {
        self.element_id_extension
    }

    pub fn eocw_min(&self) -> u8 {
        self.eocw_min
    }

    pub fn eocw_max(&self) -> u8 {
        self.eocw_max
    }

    /// Reserved bits; zero on constructed elements, preserved on decode.
    pub fn reserved(&self) -> u8 {
        self.reserved
    }

    pub fn ocw_min(&self) -> u16 {
        (1u16 << self.eocw_min) - 1
    }

    pub fn ocw_max(&self) -> u16 {
        (1u16 << self.eocw_max) - 1
    }

    /// Encodes to the fixed four-octet wire form.
    pub fn encode(&self) -> [u8; UORA_PARAM_SET_WIRE_LEN] {
        let ocw_range = self.eocw_min | (self.eocw_max << 3) | (self.reserved << 6);
        [
            self.element_id,
            UORA_PARAM_SET_LENGTH_FIELD,
            self.element_id_extension,
            ocw_range,
        ]
    }

    /// Decodes from bytes. Nonzero reserved bits are tolerated and kept.
    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        if bytes.len() < UORA_PARAM_SET_WIRE_LEN {
            return Err(WireError::Truncated { needed: UORA_PARAM_SET_WIRE_LEN, got: bytes.len() });
        }
        if bytes[1] != UORA_PARAM_SET_LENGTH_FIELD {
            return Err(WireError::BadLengthField(bytes[1]));
        }
        let ocw_range = bytes[3];
        let eocw_min = ocw_range & 0x07;
        let eocw_max = (ocw_range >> 3) & 0x07;
        if eocw_min > eocw_max {
            return Err(WireError::EocwOrder { eocw_min, eocw_max });
        }
        Ok(Self {
            element_id: bytes[0],
            element_id_extension: bytes[2],
            eocw_min,
            eocw_max,
            reserved: ocw_range >> 6,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerVariant {
    /// Buffer Status Report Poll: solicits BSRs.
    Bsrp,
    /// Basic trigger: solicits uplink data.
    Basic,
}

impl TriggerVariant {
    pub fn wire_code(self) -> u8 {
        match self {
            TriggerVariant::Bsrp => 0,
            TriggerVariant::Basic => 1,
        }
    }

    pub fn from_wire_code(code: u8) -> Result<Self, WireError> {
        match code {
            0 => Ok(TriggerVariant::Bsrp),
            1 => Ok(TriggerVariant::Basic),
            other => Err(WireError::BadVariantCode(other)),
        }
    }
}

/// One RU→AID assignment inside a trigger frame. AID 0 opens the RU for
/// random access; any other AID reserves it for that station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuAllocation {
    pub ru_index: u8,
    pub ru_tones: RuTones,
    pub aid: Aid,
}

impl RuAllocation {
    pub fn new(ru_index: u8, ru_tones: RuTones, aid: Aid) -> Result<Self, WireError> {
        if aid == UNASSOCIATED_RA_AID {
            return Err(WireError::UnassociatedAidUnsupported);
        }
        if aid > MAX_AID {
            return Err(WireError::AidOutOfRange(aid));
        }
        Ok(Self { ru_index, ru_tones, aid })
    }

    pub fn is_random_access(&self) -> bool {
        self.aid == RA_AID
    }
}

/// AP→stations resource announcement. `ul_length_us` is the airtime granted
/// for the solicited uplink transmission, in multiples of 16 µs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerFrame {
    variant: TriggerVariant,
    ul_length_us: u32,
    allocations: Vec<RuAllocation>,
}

impl TriggerFrame {
    pub fn new(
        variant: TriggerVariant,
        ul_length_us: u32,
        allocations: Vec<RuAllocation>,
    ) -> Result<Self, WireError> {
        if !ul_length_us.is_multiple_of(UL_LENGTH_UNIT_US) || ul_length_us > MAX_UL_LENGTH_US {
            return Err(WireError::BadUlLength(ul_length_us));
        }
        if allocations.len() > u8::MAX as usize {
            return Err(WireError::TooManyAllocations(allocations.len()));
        }
        let mut seen = [false; 256];
        for alloc in &allocations {
            if seen[alloc.ru_index as usize] {
                return Err(WireError::DuplicateRuIndex(alloc.ru_index));
            }
            seen[alloc.ru_index as usize] = true;
        }
        Ok(Self { variant, ul_length_us, allocations })
    }

    pub fn variant(&self) -> TriggerVariant {
        self.variant
    }

    pub fn ul_length_us(&self) -> u32 {
        self.ul_length_us
    }

    pub fn allocations(&self) -> &[RuAllocation] {
        &self.allocations
    }

    /// Number of RUs open for random access.
    pub fn n_ra(&self) -> usize {
        self.allocations.iter().filter(|a| a.is_random_access()).count()
    }

    /// RU indices open for random access, in allocation order.
    pub fn ra_ru_indices(&self) -> Vec<u8> {
        self.allocations
            .iter()
            .filter(|a| a.is_random_access())
            .map(|a| a.ru_index)
            .collect()
    }

    /// The scheduled-access allocation for `aid`, if any.
    pub fn sa_allocation_for(&self, aid: Aid) -> Option<&RuAllocation> {
        debug_assert_ne!(aid, RA_AID);
        self.allocations.iter().find(|a| a.aid == aid)
    }

    /// Whether `ru_index` is carried as a random-access RU.
    pub fn is_ra_ru(&self, ru_index: u8) -> bool {
        self.allocations
            .iter()
            .any(|a| a.ru_index == ru_index && a.is_random_access())
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 4 * self.allocations.len());
        out.push(self.variant.wire_code());
        let units = (self.ul_length_us / UL_LENGTH_UNIT_US) as u16;
        out.extend_from_slice(&units.to_le_bytes());
        out.push(self.allocations.len() as u8);
        for alloc in &self.allocations {
            out.push(alloc.ru_index);
            out.push(alloc.ru_tones.wire_code());
            out.extend_from_slice(&alloc.aid.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        if bytes.len() < 4 {
            return Err(WireError::Truncated { needed: 4, got: bytes.len() });
        }
        let variant = TriggerVariant::from_wire_code(bytes[0])?;
        let units = u16::from_le_bytes([bytes[1], bytes[2]]);
        let count = bytes[3] as usize;
        let expected = 4 + 4 * count;
        if bytes.len() < expected {
            return Err(WireError::Truncated { needed: expected, got: bytes.len() });
        }
        if bytes.len() != expected {
            return Err(WireError::LengthMismatch { expected, got: bytes.len() });
        }
        let mut allocations = Vec::with_capacity(count);
        for i in 0..count {
            let rec = &bytes[4 + 4 * i..4 + 4 * (i + 1)];
            let ru_tones = RuTones::from_wire_code(rec[1]).map_err(WireError::BadTonesCode)?;
            let aid = u16::from_le_bytes([rec[2], rec[3]]);
            allocations.push(RuAllocation::new(rec[0], ru_tones, aid)?);
        }
        Self::new(variant, units as u32 * UL_LENGTH_UNIT_US, allocations)
    }
}

/// A station's report of its queued bytes, solicited by a BSRP trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BufferStatusReport {
    pub aid: Aid,
    pub queue_bytes: u32,
}

impl BufferStatusReport {
    pub fn new(aid: Aid, queue_bytes: u32) -> Result<Self, WireError> {
        validate_sta_aid(aid)?;
        Ok(Self { aid, queue_bytes })
    }

    pub fn encode(&self) -> [u8; 6] {
        let mut out = [0u8; 6];
        out[..2].copy_from_slice(&self.aid.to_le_bytes());
        out[2..].copy_from_slice(&self.queue_bytes.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        if bytes.len() < 6 {
            return Err(WireError::Truncated { needed: 6, got: bytes.len() });
        }
        let aid = u16::from_le_bytes([bytes[0], bytes[1]]);
        let queue_bytes = u32::from_le_bytes([bytes[2], bytes[3], bytes[4], bytes[5]]);
        Self::new(aid, queue_bytes)
    }
}

/// Single AP frame acknowledging the uplink transmissions of several
/// stations at once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiStaBlockAck {
    acked: BTreeSet<Aid>,
}

impl MultiStaBlockAck {
    pub fn new(acked: impl IntoIterator<Item = Aid>) -> Result<Self, WireError> {
        let mut set = BTreeSet::new();
        for aid in acked {
            validate_sta_aid(aid)?;
            set.insert(aid);
        }
        Ok(Self { acked: set })
    }

    pub fn acked_aids(&self) -> impl Iterator<Item = Aid> + '_ {
        self.acked.iter().copied()
    }

    pub fn acks(&self, aid: Aid) -> bool {
        self.acked.contains(&aid)
    }

    pub fn len(&self) -> usize {
        self.acked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acked.is_empty()
    }

    /// Canonical encoding: count then AIDs in ascending order.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 2 * self.acked.len());
        out.extend_from_slice(&(self.acked.len() as u16).to_le_bytes());
        for aid in &self.acked {
            out.extend_from_slice(&aid.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WireError> {
        if bytes.len() < 2 {
            return Err(WireError::Truncated { needed: 2, got: bytes.len() });
        }
        let count = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        let expected = 2 + 2 * count;
        if bytes.len() < expected {
            return Err(WireError::Truncated { needed: expected, got: bytes.len() });
        }
        if bytes.len() != expected {
            return Err(WireError::LengthMismatch { expected, got: bytes.len() });
        }
        let mut acked = BTreeSet::new();
        for i in 0..count {
            let aid = u16::from_le_bytes([bytes[2 + 2 * i], bytes[3 + 2 * i]]);
            validate_sta_aid(aid)?;
            acked.insert(aid);
        }
        Ok(Self { acked })
    }
}

fn validate_sta_aid(aid: Aid) -> Result<(), WireError> {
    if aid == RA_AID {
        return Err(WireError::ZeroAid);
    }
    if aid == UNASSOCIATED_RA_AID {
        return Err(WireError::UnassociatedAidUnsupported);
    }
    if aid > MAX_AID {
        return Err(WireError::AidOutOfRange(aid));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ocw_range_octet_packs_min_in_low_bits() {
        // OCW_min 31 / OCW_max 127 correspond to exponents 5 and 7.
        let elem = UoraParameterSet::new(5, 7).unwrap();
        let bytes = elem.encode();
        assert_eq!(bytes.len(), UORA_PARAM_SET_WIRE_LEN);
        assert_eq!(bytes[3], 0x3D); // 5 | 7 << 3
        assert_eq!(bytes[1], 2);
        assert_eq!(elem.ocw_min(), 31);
        assert_eq!(elem.ocw_max(), 127);
    }

    #[test]
    fn zero_exponents_encode_to_zero_octet() {
        let elem = UoraParameterSet::new(0, 0).unwrap();
        assert_eq!(elem.encode()[3], 0x00);
    }

    #[test]
    fn param_set_roundtrips_all_valid_pairs() {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for eocw_min in 0..=7u8 {
            for eocw_max in eocw_min..=7u8 {
                let elem = UoraParameterSet::new(eocw_min, eocw_max).unwrap();
                let bytes = elem.encode();
                assert_eq!(UoraParameterSet::decode(&bytes).unwrap(), elem);
                // Injectivity over the valid domain.
                assert!(seen.insert(bytes));
                count += 1;
            }
        }
        assert_eq!(count, 36);
    }

    #[test]
    fn param_set_decode_examples() {
        let elem = UoraParameterSet::decode(&[255, 2, 0, 0x3D]).unwrap();
        assert_eq!((elem.eocw_min(), elem.eocw_max()), (5, 7));

        // Nonzero reserved bits are tolerated and survive re-encoding.
        let elem = UoraParameterSet::decode(&[255, 2, 0, 0xC0]).unwrap();
        assert_eq!((elem.eocw_min(), elem.eocw_max(), elem.reserved()), (0, 0, 3));
        assert_eq!(UoraParameterSet::decode(&elem.encode()).unwrap(), elem);
    }

    #[test]
    fn param_set_rejects_malformed() {
        assert_eq!(
            UoraParameterSet::decode(&[255, 2, 0]),
            Err(WireError::Truncated { needed: 4, got: 3 })
        );
        assert_eq!(UoraParameterSet::decode(&[255, 3, 0, 0]), Err(WireError::BadLengthField(3)));
        // Decoded exponents must satisfy the ordering invariant too.
        assert_eq!(
            UoraParameterSet::decode(&[255, 2, 0, 0x07]),
            Err(WireError::EocwOrder { eocw_min: 7, eocw_max: 0 })
        );
        assert_eq!(UoraParameterSet::new(3, 1), Err(WireError::EocwOrder { eocw_min: 3, eocw_max: 1 }));
        assert_eq!(UoraParameterSet::new(8, 8), Err(WireError::EocwOutOfRange(8)));
    }

    fn bsrp_example() -> TriggerFrame {
        // Three RA RUs plus a scheduled RU for STA 5.
        TriggerFrame::new(
            TriggerVariant::Bsrp,
            96,
            vec![
                RuAllocation::new(0, RuTones::Tones52, RA_AID).unwrap(),
                RuAllocation::new(1, RuTones::Tones52, RA_AID).unwrap(),
                RuAllocation::new(2, RuTones::Tones52, RA_AID).unwrap(),
                RuAllocation::new(3, RuTones::Tones52, 5).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trigger_roundtrips_mixed_ra_sa() {
        let tf = bsrp_example();
        let bytes = tf.encode();
        assert_eq!(bytes[3], 4); // allocation count
        assert_eq!(TriggerFrame::decode(&bytes).unwrap(), tf);
        assert_eq!(tf.n_ra(), 3);
        assert_eq!(tf.ra_ru_indices(), vec![0, 1, 2]);
        assert_eq!(tf.sa_allocation_for(5).unwrap().ru_index, 3);
        assert!(tf.sa_allocation_for(6).is_none());
    }

    #[test]
    fn trigger_roundtrips_empty() {
        let tf = TriggerFrame::new(TriggerVariant::Basic, 0, vec![]).unwrap();
        let bytes = tf.encode();
        assert_eq!(bytes, vec![1, 0, 0, 0]);
        assert_eq!(TriggerFrame::decode(&bytes).unwrap(), tf);
    }

    #[test]
    fn trigger_rejects_malformed() {
        assert_eq!(
            RuAllocation::new(0, RuTones::Tones26, UNASSOCIATED_RA_AID),
            Err(WireError::UnassociatedAidUnsupported)
        );
        assert_eq!(RuAllocation::new(0, RuTones::Tones26, 2048), Err(WireError::AidOutOfRange(2048)));

        let dup = TriggerFrame::new(
            TriggerVariant::Bsrp,
            16,
            vec![
                RuAllocation::new(1, RuTones::Tones26, RA_AID).unwrap(),
                RuAllocation::new(1, RuTones::Tones26, 9).unwrap(),
            ],
        );
        assert_eq!(dup, Err(WireError::DuplicateRuIndex(1)));

        assert_eq!(
            TriggerFrame::new(TriggerVariant::Bsrp, 17, vec![]),
            Err(WireError::BadUlLength(17))
        );

        let mut bytes = bsrp_example().encode();
        bytes[0] = 9;
        assert_eq!(TriggerFrame::decode(&bytes), Err(WireError::BadVariantCode(9)));

        let mut bytes = bsrp_example().encode();
        bytes[5] = 7;
        assert_eq!(TriggerFrame::decode(&bytes), Err(WireError::BadTonesCode(7)));

        // AID 2045 is rejected on decode as well.
        let mut bytes = bsrp_example().encode();
        bytes[6] = (2045u16 & 0xFF) as u8;
        bytes[7] = (2045u16 >> 8) as u8;
        assert_eq!(TriggerFrame::decode(&bytes), Err(WireError::UnassociatedAidUnsupported));

        let bytes = bsrp_example().encode();
        assert!(matches!(
            TriggerFrame::decode(&bytes[..bytes.len() - 1]),
            Err(WireError::Truncated { .. })
        ));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(TriggerFrame::decode(&long), Err(WireError::LengthMismatch { .. })));
    }

    #[test]
    fn bsr_roundtrip_and_validation() {
        let bsr = BufferStatusReport::new(7, 123_456).unwrap();
        assert_eq!(BufferStatusReport::decode(&bsr.encode()).unwrap(), bsr);
        assert_eq!(BufferStatusReport::new(0, 1), Err(WireError::ZeroAid));
        assert_eq!(BufferStatusReport::new(2045, 1), Err(WireError::UnassociatedAidUnsupported));
    }

    #[test]
    fn mba_roundtrip_is_canonical() {
        let ba = MultiStaBlockAck::new([5, 3, 3, 9]).unwrap();
        assert_eq!(ba.len(), 3);
        assert!(ba.acks(3) && ba.acks(5) && ba.acks(9));
        assert!(!ba.acks(4));
        let bytes = ba.encode();
        assert_eq!(MultiStaBlockAck::decode(&bytes).unwrap(), ba);
        assert_eq!(&bytes[..2], &[3, 0]);
        // AIDs ascend on the wire.
        assert_eq!(u16::from_le_bytes([bytes[2], bytes[3]]), 3);
        assert_eq!(u16::from_le_bytes([bytes[6], bytes[7]]), 9);
    }
}
