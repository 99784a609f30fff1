// SPDX-License-Identifier: Apache-2.0

//! Seeded inputs shared by the benchmarks.

use iqswitch::{RequestMatrix, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` N×N request matrices with each entry set with probability
/// `density`.
pub fn request_matrices(n: usize, density: f64, count: usize, seed: u64) -> Vec<RequestMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut m = RequestMatrix::empty(n);
            for i in 0..n {
                for o in 0..n {
                    m.set(i, o, rng.random_bool(density));
                }
            }
            m
        })
        .collect()
}

/// Dense weight matrices with entries in `1..=max`.
pub fn weight_matrices(n: usize, max: u64, count: usize, seed: u64) -> Vec<WeightMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut w = WeightMatrix::zeros(n);
            for i in 0..n {
                for o in 0..n {
                    w.set(i, o, rng.random_range(1..=max));
                }
            }
            w
        })
        .collect()
}
