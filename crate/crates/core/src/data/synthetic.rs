//! Seeded synthetic datasets for experiments and tests.

use rand_distr::{Distribution, StandardNormal};

use super::{Dataset, Label};
use crate::seed;

/// Two isotropic unit-variance Gaussians in `dim` dimensions.
///
/// Majority samples are centred at the origin, minority samples at
/// `(separation, …, separation)`. Minority rows come first.
pub fn two_gaussians(n_pos: usize, n_neg: usize, dim: usize, separation: f64, seed: u64) -> Dataset {
    let mut rng = seed::rng(seed);
    let mut features = Vec::with_capacity((n_pos + n_neg) * dim);
    let mut labels = Vec::with_capacity(n_pos + n_neg);
    for (count, label, centre) in [(n_pos, Label::Minority, separation), (n_neg, Label::Majority, 0.0)] {
        for _ in 0..count {
            for _ in 0..dim {
                let z: f64 = StandardNormal.sample(&mut rng);
                features.push(centre + z);
            }
            labels.push(label);
        }
    }
    Dataset::from_flat(format!("gauss{dim}d-{n_pos}v{n_neg}"), dim, features, labels)
        .expect("finite gaussian samples")
}

/// Uniform points in `[-1, 1]^dim` with independent labels; minority with probability `p_pos`.
pub fn uniform_noise(n: usize, dim: usize, p_pos: f64, seed: u64) -> Dataset {
    use rand::Rng;
    let mut rng = seed::rng(seed);
    let features = (0..n * dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let labels = (0..n)
        .map(|_| if rng.gen_bool(p_pos) { Label::Minority } else { Label::Majority })
        .collect();
    Dataset::from_flat("uniform", dim, features, labels).expect("finite uniform samples")
}
