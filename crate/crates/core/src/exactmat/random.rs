//! Seeded generation of small random Gaussian-rational data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::CMatrix;
use super::scalar::{rational, GaussianRational};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts drawn from `{-3, …, 3} / {1, 2}`.
pub fn random_scalar<R: Rng>(rng: &mut R) -> GaussianRational {
    let mut part = || rational(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let re = part();
    let im = part();
    GaussianRational::new(re, im)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_scalar(rng))
}

/// Resamples until the draw is nonsingular.
pub fn random_nonsingular<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.is_nonsingular() {
            return m;
        }
    }
}
