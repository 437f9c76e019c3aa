//! Computational laboratory for the group algebras of finite groups.
//!
//! The crate covers the whole pipeline from a validated Cayley table to
//! local-automorphism verdicts:
//!
//! * [`group`]: finite groups, (anti)automorphisms and characters.
//! * [`repr`]: a numerically computed dual object (one unitary irrep per class).
//! * [`conv`]: the convolution algebra, p-norms, Fourier transform, minimal ideals.
//! * [`autolab`]: weighted compositions and block-unitary Jordan maps.
//! * [`locality`]: unitary-equivalence oracle and locality verdicts.
//!
//! Haar measure is normalized throughout, so every point of `G` carries mass
//! `1/|G|`.

pub mod autolab;
pub mod conv;
mod error;
pub mod group;
pub mod json;
pub mod linalg;
pub mod locality;
pub mod repr;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for every representation block.
pub type CMat = nalgebra::DMatrix<Complex64>;
