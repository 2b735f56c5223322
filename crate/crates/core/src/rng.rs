// SPDX-License-Identifier: Apache-2.0

//! Portable seeded randomness.
//!
//! Every random draw in the engine goes through [`StreamRng`], a ChaCha8
//! generator keyed by a 64-bit seed and a 64-bit stream id. Slot seeds are
//! derived from a master seed with the SplitMix64 finalizer, so a manifest can
//! be regenerated bit-for-bit by any implementation of ChaCha8 + SplitMix64.
//! Integer sampling uses rejection on raw `u64` draws rather than a library
//! distribution, which keeps the draw sequence independent of crate versions.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream used for scenario construction (initial state and operations).
pub const STREAM_SCENARIO: u64 = 0;
/// Stream used for question parameter sampling.
pub const STREAM_QUESTIONS: u64 = 1;
/// Stream used for ablation frame selection.
pub const STREAM_ABLATION: u64 = 2;
/// Stream used for benchmark slot attribute draws (operation counts).
pub const STREAM_SLOTS: u64 = 3;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of slot `index` from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index))
}

#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n`. Panics when `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        // reject the top partial range to stay unbiased
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        if items.is_empty() {
            None
        } else {
            Some(&items[self.below(items.len())])
        }
    }

    /// Fisher-Yates shuffle, last index first.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// `k` distinct indices from `0..n`, in draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream_is_reproducible() {
        let mut a = StreamRng::new(42, STREAM_SCENARIO);
        let mut b = StreamRng::new(42, STREAM_SCENARIO);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_are_independent() {
        let mut a = StreamRng::new(42, STREAM_SCENARIO);
        let mut b = StreamRng::new(42, STREAM_QUESTIONS);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn below_stays_in_range_and_hits_every_value() {
        let mut rng = StreamRng::new(7, 0);
        let mut seen = [0usize; 5];
        for _ in 0..1000 {
            seen[rng.below(5)] += 1;
        }
        assert!(seen.iter().all(|&c| c > 100), "{seen:?}");
    }

    #[test]
    fn derive_seed_separates_slots() {
        let s: Vec<u64> = (0..100).map(|i| derive_seed(0, i)).collect();
        let mut dedup = s.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), s.len());
        // pinned so a change to the mixing function is caught
        assert_eq!(mix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn sample_indices_are_distinct() {
        let mut rng = StreamRng::new(1, 0);
        let mut idx = rng.sample_indices(10, 10);
        idx.sort();
        assert_eq!(idx, (0..10).collect::<Vec<_>>());
    }
}
