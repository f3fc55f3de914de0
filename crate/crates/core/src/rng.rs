//! Deterministic seed derivation. Every random choice in the crate draws
//! from a ChaCha stream whose seed is derived from the user seed plus a
//! label, so parallel work produces identical results on every run.

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream named `label` with index `index` under `seed`.
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    let mut h = mix(seed);
    for b in label.bytes() {
        h = mix(h ^ u64::from(b));
    }
    mix(h ^ mix(index))
}
