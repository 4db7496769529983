//! Deterministic seed derivation: one root seed, split per sub-task by
//! mixing in stable string/index labels.

/// FNV-1a over the label bytes. Stable across platforms and releases,
/// unlike the std hasher.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for a labelled sub-task.
pub fn derive_seed(root: u64, label: &str) -> u64 {
    splitmix64(root ^ label_hash(label))
}

/// Child seed for a labelled, indexed sub-task (e.g. one repetition).
pub fn derive_seed_indexed(root: u64, label: &str, index: u64) -> u64 {
    splitmix64(splitmix64(root ^ label_hash(label)).wrapping_add(index))
}

/// The one generator used everywhere randomness is needed.
pub fn seed_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
