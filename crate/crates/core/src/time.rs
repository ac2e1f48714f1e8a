//! Simulated-time units.
//!
//! All internal arithmetic runs on integer nanoseconds so that airtime
//! accounting is exact and platform-independent; microseconds appear only at
//! configuration and reporting boundaries.

use alloc::string::String;

/// Absolute simulated time or a duration, in nanoseconds.
pub type Nanos = u64;

pub fn us_to_ns(us: u64) -> Nanos {
    us.saturating_mul(1_000)
}

pub fn ns_to_us(ns: Nanos) -> u64 {
    ns / 1_000
}

/// Renders nanoseconds as decimal microseconds without float formatting,
/// trimming trailing zeros ("1359.2", "16", "0.04").
pub fn format_us(ns: Nanos) -> String {
    use core::fmt::Write;

    let us = ns / 1_000;
    let frac = (ns % 1_000) as u32;
    let mut out = String::new();
    if frac == 0 {
        let _ = write!(out, "{us}");
    } else {
        let mut digits = [0u8; 3];
        digits[0] = (frac / 100) as u8;
        digits[1] = (frac / 10 % 10) as u8;
        digits[2] = (frac % 10) as u8;
        let keep = if digits[2] != 0 {
            3
        } else if digits[1] != 0 {
            2
        } else {
            1
        };
        let _ = write!(out, "{us}.");
        for d in &digits[..keep] {
            let _ = write!(out, "{d}");
        }
    }
    out
}
