//! Seeded random streams.
//!
//! All randomness derives from a user seed through ChaCha8, a counter-based
//! generator. Independent consumers draw from distinct streams of the same
//! seed so adding draws in one place never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{CMat, Complex64};

pub type Rng = ChaCha8Rng;

/// Named stream ids, kept in one place so they never collide.
pub mod stream {
    pub const DECOMPOSE: u64 = 1;
    pub const WITNESS: u64 = 2;
    pub const SAMPLING: u64 = 3;
    pub const FILLER: u64 = 4;
    pub const CLASSIFY: u64 = 5;
    pub const ISOMETRY: u64 = 6;
    pub const INTERTWINER: u64 = 7;
    pub const SEARCH: u64 = 8;
    pub const SCENARIO: u64 = 9;
}

pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex number with independent standard normal parts.
pub fn complex_normal(rng: &mut Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

pub fn complex_normal_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn complex_normal_vec(rng: &mut Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Random Hermitian matrix `(X + X*) / 2` with Gaussian `X`.
pub fn random_hermitian(rng: &mut Rng, n: usize) -> CMat {
    let x = complex_normal_matrix(rng, n, n);
    (&x + x.adjoint()).scale(0.5)
}

/// Haar-ish random unitary: unitary polar factor of a Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMat {
    let x = complex_normal_matrix(rng, n, n);
    crate::linalg::polar_unitary(&x)
}
