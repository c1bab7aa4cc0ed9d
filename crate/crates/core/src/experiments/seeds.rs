//! Seed derivation for batches of trials.

/// SplitMix64 finalizer: a bijective 64-bit mixer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with one index.
#[inline]
pub fn mix64(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Seed of trial `trial` at vertex count `n`: `mix64(mix64(master, n), trial)`.
#[inline]
pub fn trial_seed(master: u64, n: u64, trial: u64) -> u64 {
    mix64(mix64(master, n), trial)
}
