use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;

/// The run's single pseudo-random stream.
///
/// Backed by ChaCha8 seeded through `seed_from_u64`, which is specified
/// bit-for-bit independent of platform and endianness. Every stochastic
/// decision in a run draws from this one stream in event order, so a seed
/// fully determines the run.
#[derive(Debug, Clone)]
pub struct SimRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        SimRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform integer from an inclusive range.
    pub fn draw(&mut self, range: RangeInclusive<u64>) -> Result<u64, SimError> {
        if range.is_empty() {
            return Err(SimError::EmptyRange);
        }
        Ok(self.inner.gen_range(range))
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has an empty range");
        self.inner.gen_range(0..n)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.unit() < p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_range() {
        let mut rng = SimRng::new(7);
        assert_eq!(rng.draw(0..=0).unwrap(), 0);
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=2;
        assert_eq!(rng.draw(empty), Err(SimError::EmptyRange));
    }

    #[test]
    fn golden_draws_replay() {
        // First three draws on [0, 1000] for seed 42; frozen from a reference run.
        let mut a = SimRng::new(42);
        let first: Vec<u64> = (0..3).map(|_| a.draw(0..=1000).unwrap()).collect();
        let mut b = SimRng::new(42);
        let again: Vec<u64> = (0..3).map(|_| b.draw(0..=1000).unwrap()).collect();
        assert_eq!(first, again);
        assert_eq!(first, GOLDEN_SEED42);
    }

    const GOLDEN_SEED42: [u64; 3] = [682, 951, 427];

    #[test]
    fn chi_square_uniformity() {
        let mut rng = SimRng::new(2024);
        let mut bins = [0u64; 16];
        let n = 100_000;
        for _ in 0..n {
            bins[rng.draw(0..=15).unwrap() as usize] += 1;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = bins
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square critical value, 15 degrees of freedom, alpha = 0.01
        assert!(chi2 < 30.578, "chi2 = {chi2}");
    }
}
