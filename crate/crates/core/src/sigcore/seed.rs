use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Derives a child seed from a parent seed and a textual stream key
/// (64-bit FNV-1a over the key, mixed with the parent). Stable across
/// platforms and toolchains.
pub fn derive_seed(parent: u64, key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in parent.to_le_bytes().iter().chain(key.as_bytes()) {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    // splitmix64 finaliser
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent random stream for `(seed, key)`.
pub fn stream_rng(seed: u64, key: &str) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, key))
}
