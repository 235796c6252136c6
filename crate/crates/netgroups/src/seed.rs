//! Deterministic seed derivation for parallel work units.
//!
//! Every restart, null replica and pipeline run draws from its own generator
//! seeded by `derive_seed(master, path)`. Reductions over indexed collections
//! are then order-independent, so results are bit-identical whether the units
//! run sequentially or on a thread pool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` and a path of indices.
///
/// Children at distinct paths are independent, and extending a sibling range
/// never perturbs earlier children.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix(master);
    for &part in path {
        state = splitmix(state ^ splitmix(part.wrapping_add(0x51ed_270b)));
    }
    state
}

/// Generator seeded at `derive_seed(master, path)`.
pub fn rng_at(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
