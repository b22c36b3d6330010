//! Seeded random source for randomized algebra (splitting polynomials,
//! choosing shifts and evaluation points). Results are reproducible per seed.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct AlgRng(ChaCha8Rng);

impl AlgRng {
    pub fn new(seed: u64) -> Self {
        AlgRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n` (n > 0), ignoring the negligible modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform in `-r..=r`.
    pub fn small_int(&mut self, r: i64) -> i64 {
        self.below((2 * r + 1) as u64) as i64 - r
    }
}
