#![allow(dead_code)]

use entmon::linalg::{haar_isometry, CMatrix};
use entmon::monotones::RankVector;
use entmon::rng::Stream;
use rand::Rng;

pub fn random_dims(rng: &mut Stream, parties: usize, max: usize) -> Vec<usize> {
    (0..parties).map(|_| rng.random_range(2..=max)).collect()
}

/// Random ranks with at least one party below full rank.
pub fn random_ranks(rng: &mut Stream, dims: &[usize]) -> RankVector {
    loop {
        let ks: Vec<usize> = dims.iter().map(|&d| rng.random_range(1..=d)).collect();
        if ks.as_slice() != dims {
            return RankVector::new(ks);
        }
    }
}

/// Kraus operators `A_1..A_m` on a `d`-level party with `Σ A†A = I`, cut
/// from the rows of a Haar isometry.
pub fn random_instrument(d: usize, outcomes: usize, rng: &mut Stream) -> Vec<CMatrix> {
    let v = haar_isometry(outcomes * d, d, rng);
    (0..outcomes)
        .map(|j| v.rows(j * d, d).into_owned())
        .collect()
}
