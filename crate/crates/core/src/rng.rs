//! Counter-based random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by a
//! 64-bit seed and selected by a 64-bit counter (restart index, trial index,
//! ...). Work items can therefore be scheduled in any order, on any number of
//! threads, and still see the same numbers.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::math::sqrt;

/// Independent generator for work item `counter` under `seed`.
pub fn stream(seed: u64, counter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    rng
}

pub fn normal<R: RngCore>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex vector with independent standard normal real and imaginary parts.
pub fn complex_gaussian<R: RngCore>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re = normal(rng);
            let im = normal(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Haar-distributed unit vector.
pub fn haar_state<R: RngCore>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let mut v = complex_gaussian(rng, dim);
        let norm = sqrt(crate::matrix::norm_sqr(&v));
        if norm > 1e-300 {
            v.iter_mut().for_each(|z| *z /= norm);
            return v;
        }
    }
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` by rejection, so no modulo bias.
pub fn index<R: RngCore>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0);
    let n = n as u64;
    let zone = u64::MAX - (u64::MAX % n);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % n) as usize;
        }
    }
}

/// Samples an index with probability proportional to `weights`.
pub fn weighted_index<R: RngCore>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let target = uniform(rng) * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // Rounding can leave `target` just past the last bucket.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}
