//! Seed derivation for reproducible, parallel replications.
//!
//! A master seed fans out to per-replication seeds, and each replication fans
//! out to one independent stream per subsystem. Changing how many draws one
//! subsystem consumes never perturbs another subsystem or another replication.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Subsystems with their own random stream inside one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Population = 1,
    Grid = 2,
    Network = 3,
    Wind = 4,
    Damage = 5,
    Repair = 6,
    Diffusion = 7,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for replication `rep` under `master`.
pub fn replication_seed(master: u64, rep: u64) -> u64 {
    splitmix64(master ^ splitmix64(rep.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// RNG for one subsystem stream of one replication.
pub fn stream_rng(replication_seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(replication_seed ^ (stream as u64).wrapping_mul(
        0x2545_f491_4f6c_dd1d,
    )))
}
