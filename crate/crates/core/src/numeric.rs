//! Small float helpers that work without `std` and evaluate identically on
//! every platform, which the determinism guarantees depend on.

/// Ceiling of a non-negative finite `f64`, as an integer.
pub fn ceil_pos(x: f64) -> u64 {
    debug_assert!(x >= 0.0);
    let t = x as u64;
    if (t as f64) < x {
        t + 1
    } else {
        t
    }
}

/// `base^exp` by binary exponentiation.
pub fn powi(base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

/// Square root via Newton iterations from a bit-level seed. Relative error
/// is well below 1e-14 over the ranges used here (statistics, not geometry).
pub fn sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let mut y = f64::from_bits((x.to_bits() >> 1) + 0x1FF8_0000_0000_0000);
    for _ in 0..4 {
        y = 0.5 * (y + x / y);
    }
    y
}
