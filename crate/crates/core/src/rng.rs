//! Seeded random streams.
//!
//! Every consumer of randomness asks for its own stream keyed by
//! `(seed, index)`, so results do not depend on scheduling.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Stream = ChaCha8Rng;

/// Independent counter-based stream `index` of the generator seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian sample (independent N(0,1) real and imaginary parts).
pub fn complex_gaussian(rng: &mut Stream) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn complex_gaussian_vec(rng: &mut Stream, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}
