//! Deterministic seed derivation.
//!
//! Every randomized stage owns a ChaCha stream derived from the master seed
//! plus a purpose tag and indices, so results never depend on call order,
//! thread count, or how many draws an earlier stage consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Purpose tags for derived streams.
pub mod tag {
    pub const LABELS: u64 = 0x4C41_4245_4C53;
    pub const LATENTS: u64 = 0x4C41_5445_4E54;
    pub const EDGES: u64 = 0x4544_4745_53;
    pub const MOMENTS: u64 = 0x4D4F_4D45_4E54;
    pub const TRIAL: u64 = 0x5452_4941_4C;
    pub const KERNEL_CHECK: u64 = 0x4B43_4845_434B;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a master seed and a tag path into a child seed.
pub fn derive(master: u64, tags: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &t in tags {
        s = splitmix64(s ^ splitmix64(t));
    }
    s
}

/// A ChaCha stream for the given seed path.
pub fn stream(master: u64, tags: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive(master, tags))
}

/// Fold an f64 into a tag (exact bit pattern, so distinct grid coordinates
/// derive distinct streams).
pub fn f64_tag(x: f64) -> u64 {
    x.to_bits()
}
