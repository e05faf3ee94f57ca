//! The random stream shared by all generators.
//!
//! Every generator draws from ChaCha8 seeded with `ChaCha8Rng::seed_from_u64`.
//! Only two primitives consume the stream, and each consumes exactly one
//! `next_u64` per accepted draw:
//!
//! * [`SeededStream::uniform`]: `(x >> 11) * 2^-53`, a float in `[0, 1)`.
//! * [`SeededStream::below`]: Lemire's widening multiply with rejection, an
//!   unbiased integer in `0..bound`. Rejected draws consume extra words.
//!
//! Neither depends on `rand`'s distribution code, so outputs only change if
//! the ChaCha8 keystream does.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform float in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform integer in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = (self.next_u64() as u128) * (bound as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as usize;
            }
        }
    }

    /// Fisher–Yates from the back: for `i = len-1 ..= 1` swap `i` with `below(i + 1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededStream::new(7);
        let mut b = SeededStream::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn below_stays_in_range_and_covers_it() {
        let mut s = SeededStream::new(1);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let x = s.below(7);
            seen[x] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn uniform_mean_is_half() {
        let mut s = SeededStream::new(3);
        let mean: f64 = (0..100_000).map(|_| s.uniform()).sum::<f64>() / 100_000.0;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");
    }
}
