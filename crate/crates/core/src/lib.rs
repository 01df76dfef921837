//! Fell bundles over finite groups realized as graded families of matrix
//! subspaces, with their regular representations, cross-sectional
//! C*-algebras, Fourier–Stieltjes spaces `B(B)` and Fourier spaces `A(B)`.

pub mod bundle;
pub mod classical;
pub mod error;
pub mod families;
pub mod fourier;
pub mod functional;
pub mod group;
pub mod json;
pub mod linalg;
pub mod regular;
pub mod section;
pub mod suite;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default seed for every randomized routine.
pub const DEFAULT_SEED: u64 = 0;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
