//! Exact-arithmetic engine for the sl₂ Knizhnik–Zamolodchikov systems at
//! κ = ±2 on weight subspaces of L^⊗(2g+1), their p-hypergeometric
//! solutions in characteristic p, Satake-type intertwiners and p-curvature.

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod kz;
pub mod phyper;
pub mod report;
pub mod satake;
pub mod suites;
pub mod weightspace;

pub use algebra::{Layout, Matrix, Mono, MultiPoly, PrimeField, Rationals, Ring, Subspace};
pub use error::{KzpError, Result};

/// The generator behind every random choice; a fixed seed reproduces runs.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
