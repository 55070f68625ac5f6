//! Seeded randomness. All randomized routines take an explicit seed so that runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn element(rng: &mut SeededRng, f: PrimeField) -> u32 {
    rng.gen_range(0..f.characteristic())
}

pub fn nonzero_element(rng: &mut SeededRng, f: PrimeField) -> u32 {
    rng.gen_range(1..f.characteristic())
}
