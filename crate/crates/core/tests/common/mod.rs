#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidconv::rational::{int, rat};
use rigidconv::{FuchsianSystem, MatQ, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `[-bound, bound]` and a denominator drawn
/// from `dens`.
pub fn small_rational(rng: &mut ChaCha8Rng, bound: i64, dens: &[i64]) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = dens[rng.gen_range(0..dens.len())];
    rat(num, den)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64, dens: &[i64]) -> MatQ {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| small_rational(rng, bound, dens)).collect())
        .collect();
    MatQ::from_rows(rows).unwrap()
}

pub fn random_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    points: &[i64],
    bound: i64,
    dens: &[i64],
) -> FuchsianSystem {
    FuchsianSystem::new(
        n,
        points.iter().map(|&q| int(q)).collect(),
        points
            .iter()
            .map(|_| random_matrix(rng, n, bound, dens))
            .collect(),
    )
    .unwrap()
}

/// Rank-two system on three finite points with invertible residues that is
/// absolutely irreducible.
pub fn random_irreducible_rank_two(rng: &mut ChaCha8Rng) -> FuchsianSystem {
    loop {
        let f = random_system(rng, 2, &[0, 1, 3], 3, &[1, 2, 3]);
        if f.residues().iter().all(|a| a.nullity() == 0) && f.is_absolutely_irreducible() {
            return f;
        }
    }
}
