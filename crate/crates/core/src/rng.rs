//! The one PRNG used everywhere: xoshiro256** seeded through SplitMix64.
//!
//! Uniform reals are derived from the top 53 bits of each output so that a
//! given seed yields the same stream on every platform.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

pub type Rng = Xoshiro256StarStar;

pub fn seeded(seed: u64) -> Rng {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Uniform in `[0, 1)`.
#[inline]
pub fn unit(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `[lo, hi)`.
#[inline]
pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Uniform integer in `lo..=hi`.
pub fn int_in(rng: &mut Rng, lo: i64, hi: i64) -> i64 {
    assert!(lo <= hi);
    let span = (hi - lo) as u64 + 1;
    // Rejection sampling keeps the draw unbiased.
    let zone = u64::MAX - (u64::MAX % span);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return lo + (v % span) as i64;
        }
    }
}

/// Standard normal via Box–Muller.
pub fn normal(rng: &mut Rng) -> f64 {
    let u1 = 1.0 - unit(rng);
    let u2 = unit(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
