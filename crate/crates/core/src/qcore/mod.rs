//! Dense complex linear algebra at small dimension, quantum states and
//! information-theoretic primitives.

mod constructors;
mod info;
pub(crate) mod linalg;
pub mod random;
mod state;

pub use constructors::{cc_state, mems_state, strictly_correlated_cc};
pub use info::{
    bures_distance, fidelity, hellinger_affinity, hellinger_distance, majorizes, purity,
    renyi_entropy, shannon_entropy, von_neumann_entropy, xlnx,
};
pub use linalg::{hermitian_eig, matrix_sqrt_psd, ComplexMatrix, HermitianEigen, C64};
pub use random::{haar_pure, random_density, random_spectrum, random_unitary};
pub use state::{
    partial_trace, partial_transpose, purify, schmidt, spectrum, BipartiteSplit, DensityMatrix,
    PureState, Purification, Spectrum, Subsystem,
};

/// Hermiticity tolerance used when validating inputs.
pub const TAU_HERM: f64 = 1e-9;
/// Most negative eigenvalue tolerated for a positive semidefinite input.
pub const TAU_PSD: f64 = 1e-9;
/// Trace (or probability sum) tolerance used when validating inputs.
pub const TAU_TR: f64 = 1e-9;
/// Squared-norm tolerance for pure states.
pub const TAU_NORM: f64 = 1e-9;
/// Eigenvalues at or below this value are dropped from a [`Spectrum`].
pub const TAU_ZERO: f64 = 1e-12;
/// Tolerance for reconstruction round trips.
pub const TAU_NUM: f64 = 1e-8;
