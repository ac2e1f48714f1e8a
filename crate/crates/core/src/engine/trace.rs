//! Event trace for validation and debugging.
//!
//! One record per protocol event, rendered as a line of
//! `time_us<TAB>kind<TAB>actor<TAB>detail`. Replaying a run with the same
//! (config, seed) reproduces the identical log.

use alloc::string::String;
use core::fmt;

use crate::{format_us, Aid, Nanos};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Actor {
    Ap,
    Sta(Aid),
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Ap => write!(f, "ap"),
            Actor::Sta(aid) => write!(f, "sta{aid}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    CycleStart,
    Beacon,
    TfTx,
    Obo,
    BsrTx,
    DataTx,
    RuOutcome,
    MbaTx,
    Delivery,
    RunEnd,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::CycleStart => "cycle_start",
            TraceKind::Beacon => "beacon",
            TraceKind::TfTx => "tf_tx",
            TraceKind::Obo => "obo",
            TraceKind::BsrTx => "bsr_tx",
            TraceKind::DataTx => "data_tx",
            TraceKind::RuOutcome => "ru_outcome",
            TraceKind::MbaTx => "mba_tx",
            TraceKind::Delivery => "delivery",
            TraceKind::RunEnd => "run_end",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub time_ns: Nanos,
    pub kind: TraceKind,
    pub actor: Actor,
    pub detail: String,
}

impl TraceRecord {
    /// The stable line format consumed by trace-based tests and tooling.
    pub fn render(&self) -> String {
        use core::fmt::Write;
        let mut line = String::new();
        let _ = write!(line, "{}\t{}\t{}\t{}", format_us(self.time_ns), self.kind, self.actor, self.detail);
        line
    }
}
