//! Time-ordered event queue with a deterministic tie-break.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Aid, Nanos};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    PacketArrival { aid: Aid },
    Beacon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledEvent {
    pub time_ns: Nanos,
    seq: u64,
    pub kind: EventKind,
}

impl Ord for ScheduledEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we pop the earliest (time,
        // insertion sequence) pair first.
        (other.time_ns, other.seq).cmp(&(self.time_ns, self.seq))
    }
}

impl PartialOrd for ScheduledEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending events ordered by absolute time; ties resolve by insertion order.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<ScheduledEvent>,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schedule(&mut self, time_ns: Nanos, kind: EventKind) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(ScheduledEvent { time_ns, seq, kind });
    }

    /// Pops the next event not later than `now`.
    pub fn pop_due(&mut self, now: Nanos) -> Option<ScheduledEvent> {
        if self.heap.peek().is_some_and(|ev| ev.time_ns <= now) {
            self.heap.pop()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
