//! Deterministic per-trial random streams.
//!
//! A trial's seed is derived from `(master, cell, trial)` with [`mix_seed`],
//! then expanded into a [`TrialRng`] (ChaCha8). The mixing function is small
//! and fixed so that ports in other languages can reproduce the streams:
//!
//! ```text
//! splitmix64(x):  x += 0x9E3779B97F4A7C15
//!                 z = x
//!                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                 return z ^ (z >> 31)
//! mix_seed(m, c, t) = splitmix64(splitmix64(splitmix64(m) ^ c) ^ t)
//! ```
//!
//! All arithmetic wraps modulo 2^64.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)
}

/// The generator for a single 64-bit seed.
pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The generator for trial `trial` of cell `cell`.
pub fn trial_rng(master: u64, cell: u64, trial: u64) -> TrialRng {
    rng_from_seed(mix_seed(master, cell, trial))
}
