//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 so results reproduce
//! across platforms. Independent work items (Monte Carlo frames, candidate
//! patterns) get their own stream keyed by the run seed and the item's
//! coordinates, which keeps results independent of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type CodeRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for a whole run.
pub fn seeded(seed: u64) -> CodeRng {
    CodeRng::seed_from_u64(seed)
}

/// Generator for work item `keys` of run `seed`.
pub fn stream(seed: u64, keys: &[u64]) -> CodeRng {
    let mut h = splitmix64(seed);
    for &k in keys {
        h = splitmix64(h ^ splitmix64(k.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    CodeRng::seed_from_u64(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(1, &[2, 3]).random();
        let b: u64 = stream(1, &[2, 3]).random();
        let c: u64 = stream(1, &[3, 2]).random();
        let d: u64 = stream(2, &[2, 3]).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
