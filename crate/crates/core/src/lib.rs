//! Simulation core for IEEE 802.11ax Uplink OFDMA Random Access (UORA).
//!
//! A single-BSS model of the trigger-based uplink exchange: the AP polls
//! buffer statuses with a BSRP trigger frame, stations contend for random
//! access RUs with the OBO/OCW back-off procedure, and a second (Basic)
//! trigger frame schedules the actual data transmissions. The crate provides
//!
//! * [`wire`] — byte codecs for the UORA Parameter Set element, trigger
//!   frames, buffer status reports and Multi-STA Block Acks,
//! * [`backoff`] — the per-station OBO/OCW contention state machine,
//! * [`mu_edca`] — the MU EDCA parameter/timer state used to disable
//!   station-side contention,
//! * [`scheduler`] — the AP-side round-robin resource scheduler that
//!   decouples polling resources from data resources,
//! * [`phy`] — RU geometry, rate tables, frame durations and per-RU
//!   reception resolution,
//! * [`engine`] — the deterministic discrete-event loop tying it together,
//! * [`analytics`] — an independent contention oracle and cycle-time
//!   throughput estimator used to validate the simulator.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries file IO, experiment sweeps and CSV output.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analytics;
pub mod backoff;
pub mod engine;
pub mod mu_edca;
pub mod phy;
pub mod scheduler;
pub mod wire;

mod numeric;
mod rng;
mod time;

pub use rng::ActorRng;
pub use time::{format_us, ns_to_us, us_to_ns, Nanos};

/// Association identifier of a station. AID 0 on an RU allocation denotes
/// random access; AIDs of real stations start at 1.
pub type Aid = u16;

/// AID value that marks an RU as open for random access.
pub const RA_AID: Aid = 0;

/// AID reserved for random access by unassociated stations. Not supported
/// by this simulator; rejected wherever it appears.
pub const UNASSOCIATED_RA_AID: Aid = 2045;

/// Largest AID representable in the 11-bit AID12 subfield we model.
pub const MAX_AID: Aid = 2047;
