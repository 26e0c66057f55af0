//! Seeded randomness for generators and scans.
//!
//! Every random stream is SplitMix64 (state increment `0x9E3779B97F4A7C15`,
//! output mix constants `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`) with
//! its state set directly to the seed. Bounded integers use rejection
//! sampling on whole 64-bit outputs, so a sequence is reproducible from the
//! algorithm description alone.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    /// Independent stream number `index` under `seed`: the generator is
    /// seeded with the first output of SplitMix64 started at
    /// `seed + index * 0x9E3779B97F4A7C15`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut base = Rng::new(seed.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)));
        Rng::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty sampling range");
        let bound = bound as u64;
        // Largest multiple of `bound` that fits, so `x % bound` is unbiased.
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < limit {
                return (x % bound) as usize;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty sampling range {lo}..={hi}");
        lo + self.below(hi - lo + 1)
    }

    /// Fisher-Yates from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// `k` distinct elements of `items`, returned sorted.
    pub fn subset(&mut self, items: &[usize], k: usize) -> Vec<usize> {
        let mut pool = items.to_vec();
        for i in 0..k {
            let j = i + self.below(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool.sort_unstable();
        pool
    }
}
