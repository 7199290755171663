//! Reproducible sampling.
//!
//! All randomness comes from SplitMix64 (the `rand_xoshiro` implementation),
//! whose constants are:
//!
//! ```text
//! state  = state + 0x9E3779B97F4A7C15          (wrapping)
//! z      = state
//! z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//! z      = (z ^ (z >> 27)) * 0x94D049BB133111EB (wrapping)
//! output = z ^ (z >> 31)
//! ```
//!
//! An integer uniform in `[-r, r]` is `(output mod (2r + 1)) - r`. Matrices
//! are filled in column-stacked order. Sample `i` of a sweep with seed `s`
//! draws from its own generator seeded with `mix(s + (i + 1) * 0x9E3779B97F4A7C15)`
//! where `mix` is the output function above applied to its argument, so
//! samples can be evaluated in any order and still reproduce.

use rand_xoshiro::rand_core::{Rng, SeedableRng};

use crate::linalg::{q, Mat, Rational};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Default half-width of the integer entry range.
pub const DEFAULT_RANGE: u64 = 9;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    inner: rand_xoshiro::SplitMix64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { inner: rand_xoshiro::SplitMix64::seed_from_u64(seed) }
    }

    /// Generator for sample `index` of a sweep seeded with `seed`. Its seed
    /// is `mix(seed + (index + 1) * GOLDEN)`, the first output of a generator
    /// started at `seed + index * GOLDEN`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        Self::new(Self::new(seed.wrapping_add(index.wrapping_mul(GOLDEN))).next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[-range, range]`.
    pub fn int(&mut self, range: u64) -> i64 {
        let width = 2 * range + 1;
        (self.next_u64() % width) as i64 - range as i64
    }

    pub fn rational(&mut self, range: u64) -> Rational {
        q(self.int(range))
    }

    pub fn nonzero_rational(&mut self, range: u64) -> Rational {
        let range = range.max(1);
        loop {
            let v = self.int(range);
            if v != 0 {
                return q(v);
            }
        }
    }

    pub fn mat(&mut self, n: usize, range: u64) -> Mat {
        let coords = (0..n * n).map(|_| self.rational(range)).collect();
        Mat::from_vec(n, coords).expect("n*n coordinates")
    }

    /// Rejection-samples an invertible matrix.
    pub fn invertible_mat(&mut self, n: usize, range: u64) -> Mat {
        loop {
            let m = self.mat(n, range);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_outputs() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut g = SplitMix64::new(1234567);
        assert_eq!(g.next_u64(), 6457827717110365317);
        assert_eq!(g.next_u64(), 3203168211198807973);
        assert_eq!(g.next_u64(), 9817491932198370423);
    }

    #[test]
    fn sample_seed_is_the_matching_output_of_the_sweep_generator() {
        let mut sweep = SplitMix64::new(99);
        for i in 0..5 {
            let seed = sweep.next_u64();
            assert_eq!(SplitMix64::for_sample(99, i).next_u64(), SplitMix64::new(seed).next_u64());
        }
    }

    #[test]
    fn ints_stay_in_range() {
        let mut g = SplitMix64::new(7);
        for _ in 0..1000 {
            let v = g.int(3);
            assert!((-3..=3).contains(&v));
        }
    }
}
