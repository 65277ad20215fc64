//! Seed derivation.
//!
//! Runs derive their random streams from `(base_seed, seed_index)` through the
//! SplitMix64 finalizer, so seeds never have to be stored and neighbouring
//! indices give unrelated streams.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines two words: `splitmix64(a ^ splitmix64(b))`.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

/// Seed of run `seed_index` under `base_seed`.
pub fn run_seed(base_seed: u64, seed_index: u64) -> u64 {
    mix(base_seed, seed_index)
}

/// Uniform variate in `[0, 1)` from the top 53 bits of a word.
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
