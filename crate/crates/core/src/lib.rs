//! Bounds on the entanglement inside a bipartite system `A = A1 ⊗ A2` in
//! terms of the correlations (of any kind) that `A` shares with an outside
//! system `B`.
//!
//! The crate is organised in four layers:
//!
//! - [`qcore`]: small dense complex linear algebra, density matrices, pure
//!   states, spectra, entropies, distances and seeded sampling.
//! - [`measures`]: internal entanglement of `A` (concurrence, entanglement of
//!   formation, negativity) and the spectral cap on two-qubit entanglement.
//! - [`correlations`]: correlation monotones between `A` and `B` (mutual
//!   information, Bures and Hellinger distance to product states) and their
//!   spectral functions.
//! - [`bounds`]: the tight upper bound `E(ρ_A) ≤ ξ(C(ρ))` for two qubits,
//!   its classical-classical variant, numeric infimum oracles and the
//!   β-deformation family of probability vectors.
//!
//! All logarithms are natural; entropies are in nats.

pub mod bounds;
pub mod correlations;
mod error;
pub mod measures;
pub mod qcore;

pub use error::{Error, Result};

/// `ln 2`, the maximal entanglement of formation of two qubits.
pub const LN2: f64 = std::f64::consts::LN_2;
