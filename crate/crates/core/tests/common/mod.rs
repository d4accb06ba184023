#![allow(dead_code)]

use proptest::prelude::*;
use relop::ensemble::{gaussian_hermitian, seeded_rng, Family};
use relop::{HermitianMatrix, ScalarFunction};

/// (seed, n) pairs; matrices are built from the seed so shrinking stays cheap.
pub fn seed_and_size(max_n: usize) -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1..=max_n)
}

pub fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

pub fn registered() -> impl Strategy<Value = ScalarFunction> {
    prop::sample::select(ScalarFunction::registry())
}

/// A from the family, K a Gaussian Hermitian perturbation of moderate size.
pub fn pair(seed: u64, n: usize, fam: Family) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = seeded_rng(seed);
    let a = fam.sample(n, &mut rng);
    let k = gaussian_hermitian(n, 0.5, &mut rng);
    (a, k)
}
