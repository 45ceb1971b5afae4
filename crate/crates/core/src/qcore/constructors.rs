use super::linalg::{ComplexMatrix, C64};
use super::state::{BipartiteSplit, DensityMatrix, Spectrum};
use super::TAU_TR;
use crate::error::{check_dim, domain, Error, Result};

/// `∑_ij p_ij |i⟩⟨i| ⊗ |j⟩⟨j|` for a row-major `d_a × d_b` joint distribution.
pub fn cc_state(joint: &[f64], d_a: usize, d_b: usize) -> Result<DensityMatrix> {
    check_dim(d_a * d_b, joint.len())?;
    if joint.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return domain("joint probabilities must be finite and non-negative");
    }
    let total: f64 = joint.iter().sum();
    if (total - 1.0).abs() > TAU_TR {
        return domain(format!("joint probabilities sum to {total}"));
    }
    // index (i, j) of the joint table is the product basis index i·d_b + j
    Ok(DensityMatrix::new_unchecked(ComplexMatrix::from_real_diagonal(joint)))
}

/// Strictly correlated classical-classical state `∑_i p_i |ii⟩⟨ii|`.
pub fn strictly_correlated_cc(p: &Spectrum, d_a: usize, d_b: usize) -> Result<DensityMatrix> {
    if p.len() > d_a.min(d_b) {
        return Err(Error::Capacity(format!(
            "{} components do not fit in a {d_a}×{d_b} system",
            p.len()
        )));
    }
    let mut joint = vec![0.0; d_a * d_b];
    for (i, &pi) in p.as_slice().iter().enumerate() {
        joint[i * d_b + i] = pi;
    }
    cc_state(&joint, d_a, d_b)
}

/// Mixed maximally entangled state `∑_i p_i |φ_i⟩⟨φ_i|` with
/// `|φ_i⟩ = ∑_j |j⟩_1 |i·d1 + j⟩_2 / √d1`. Needs `d2 ≥ d1 · len(p)`.
pub fn mems_state(p: &Spectrum, split: BipartiteSplit) -> Result<DensityMatrix> {
    let (d1, d2) = (split.d1(), split.d2());
    if d1 * p.len() > d2 {
        return Err(Error::Capacity(format!(
            "{} maximally entangled blocks of size {d1} need d2 ≥ {}, got {d2}",
            p.len(),
            d1 * p.len()
        )));
    }
    let n = split.dim();
    let amp = C64::new(1.0 / (d1 as f64).sqrt(), 0.0);
    let mut basis = ComplexMatrix::zeros(n).into_dmatrix();
    for i in 0..p.len() {
        for j in 0..d1 {
            basis[(j * d2 + i * d1 + j, i)] = amp;
        }
    }
    let weights = p.as_slice();
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| {
        (0..weights.len())
            .map(|i| basis[(r, i)] * basis[(c, i)].conj() * weights[i])
            .sum()
    });
    Ok(DensityMatrix::new_unchecked(ComplexMatrix::wrap(m)))
}
