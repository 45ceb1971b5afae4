//! Seeded sampling of states, unitaries and spectra.
//!
//! Every random stream is a ChaCha8 generator. A run seed selects the key and
//! an independent 64-bit stream id is carved out for each unit of work (a
//! sample index, a restart, a grid cell), so results do not depend on how
//! work is scheduled across threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::linalg::{ComplexMatrix, C64};
use super::state::{BipartiteSplit, DensityMatrix, PureState, Spectrum, Subsystem};
use crate::error::{domain, Result};

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` under run seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian with independent `N(0, 1)` parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state from normalized complex Gaussians.
pub fn haar_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim == 0 {
        return domain("dimension must be positive");
    }
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return Ok(psi);
        }
    }
}

/// State of a `dim`-level system drawn from the measure induced by tracing
/// out a `ancilla_dim`-level partner of a Haar pure state.
pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    ancilla_dim: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let split = BipartiteSplit::new(dim, ancilla_dim)?;
    let psi = haar_pure(split.dim(), rng)?;
    psi.reduced(split, Subsystem::First)
}

/// Uniform draw from the probability simplex (normalized exponentials),
/// sorted in decreasing order.
pub fn random_spectrum<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Result<Spectrum> {
    if size == 0 {
        return domain("spectrum size must be positive");
    }
    let w: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    Spectrum::from_weights(&w)
}

/// Haar unitary: Gram–Schmidt orthonormalization of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        if let Some(q) = gram_schmidt(g) {
            return ComplexMatrix::wrap(q);
        }
    }
}

fn gram_schmidt(mut m: DMatrix<C64>) -> Option<DMatrix<C64>> {
    let n = m.ncols();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..m.nrows()).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
            for i in 0..m.nrows() {
                let mk = m[(i, k)];
                m[(i, j)] -= proj * mk;
            }
        }
        let norm = m.column(j).norm();
        if norm < 1e-10 {
            return None;
        }
        m.column_mut(j).unscale_mut(norm);
    }
    Some(m)
}
