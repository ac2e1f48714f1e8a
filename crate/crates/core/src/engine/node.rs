//! Per-station simulation state.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::backoff::UoraState;
use crate::mu_edca::MuEdcaState;
use crate::rng::ActorRng;
use crate::{Aid, Nanos};

#[derive(Debug, Clone, Copy)]
pub struct Packet {
    pub bytes: u32,
    pub enqueue_ns: Nanos,
}

pub struct StaNode {
    pub aid: Aid,
    pub uora: UoraState,
    pub edca: MuEdcaState,
    pub rng: ActorRng,
    pub traffic_enabled: bool,
    queue: VecDeque<Packet>,
    queue_bytes: u64,
    /// Set whenever the queue changes relative to the last acknowledged
    /// report; a station contends only while it has something new to say.
    needs_report: bool,
    /// Pending state at the previous trigger, to detect idle→pending
    /// transitions (which restart the contention window).
    pub was_pending: bool,
    /// Scripted RA RU choices, consumed front to back.
    pub forced_ru: VecDeque<u8>,
    /// Scripted first OBO value, applied after the next (re)initialization.
    pub forced_initial_obo: Option<u16>,
}

impl StaNode {
    pub fn new(aid: Aid, uora: UoraState, rng: ActorRng) -> Self {
        Self {
            aid,
            uora,
            edca: MuEdcaState::new(),
            rng,
            traffic_enabled: true,
            queue: VecDeque::new(),
            queue_bytes: 0,
            needs_report: false,
            was_pending: false,
            forced_ru: VecDeque::new(),
            forced_initial_obo: None,
        }
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Queue size as reported in a BSR (saturating to the field width).
    pub fn reportable_queue_bytes(&self) -> u32 {
        self.queue_bytes.min(u32::MAX as u64) as u32
    }

    pub fn enqueue(&mut self, packet: Packet) {
        self.queue_bytes += packet.bytes as u64;
        self.queue.push_back(packet);
        self.needs_report = true;
    }

    /// Removes the `count` head-of-line packets (an acknowledged burst).
    pub fn dequeue_front(&mut self, count: usize) -> Vec<Packet> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let Some(p) = self.queue.pop_front() else { break };
            self.queue_bytes -= p.bytes as u64;
            out.push(p);
        }
        if !out.is_empty() {
            self.needs_report = true;
        }
        out
    }

    /// Whether the station has a reason to contend: data queued and a
    /// status the AP has not acknowledged yet.
    pub fn pending_bsr(&self) -> bool {
        self.queue_bytes > 0 && self.needs_report
    }

    /// Called when the AP acknowledged a BSR carrying `reported_bytes`.
    pub fn bsr_acknowledged(&mut self, reported_bytes: u32) {
        self.needs_report = self.reportable_queue_bytes() != reported_bytes;
    }
}
