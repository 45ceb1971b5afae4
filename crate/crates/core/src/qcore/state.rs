use nalgebra::DMatrix;

use super::linalg::{eig_unchecked, ComplexMatrix, HermitianEigen, C64};
use super::{TAU_HERM, TAU_NORM, TAU_PSD, TAU_TR, TAU_ZERO};
use crate::error::{check_dim, domain, Error, Result};

/// Factorization `d = d1 · d2` of a Hilbert-space dimension.
///
/// Product basis vectors are indexed factor-1 major: `i = i1 · d2 + i2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteSplit {
    d1: usize,
    d2: usize,
}

impl BipartiteSplit {
    /// Any split with both factors at least 1. Used for `A` versus `B` cuts,
    /// where the outside system may be smaller than `A`.
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return domain(format!("split ({d1}, {d2}) has a zero factor"));
        }
        Ok(Self { d1, d2 })
    }

    /// Split of the internal system `A = A1 ⊗ A2` with `d2 ≥ d1 ≥ 1`.
    pub fn ordered(d1: usize, d2: usize) -> Result<Self> {
        if d2 < d1 {
            return domain(format!("split ({d1}, {d2}) needs d2 ≥ d1"));
        }
        Self::new(d1, d2)
    }

    /// The two-qubit split `(2, 2)`.
    pub const fn qubits() -> Self {
        Self { d1: 2, d2: 2 }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn factor(&self, which: Subsystem) -> usize {
        match which {
            Subsystem::First => self.d1,
            Subsystem::Second => self.d2,
        }
    }
}

/// Which factor of a [`BipartiteSplit`] an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Probability vector of strictly positive components in non-increasing
/// order. Consumers treat missing trailing components as zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Validates an already sorted, normalized, strictly positive vector.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return domain("spectrum is empty");
        }
        if components.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return domain("spectrum components must be finite and strictly positive");
        }
        if components.windows(2).any(|w| w[0] < w[1]) {
            return domain("spectrum components must be non-increasing");
        }
        let total: f64 = components.iter().sum();
        if (total - 1.0).abs() > TAU_TR {
            return domain(format!("spectrum sums to {total}, not 1"));
        }
        Ok(Self(components))
    }

    /// Sorts, normalizes and drops components at or below `τ_zero` (after a
    /// first normalization), then renormalizes the survivors to sum to 1.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return domain("weights must be finite");
        }
        let total: f64 = weights.iter().filter(|&&w| w > 0.0).sum();
        if !(total > 0.0) {
            return domain("weights have no positive mass");
        }
        if let Some(&w) = weights.iter().find(|&&w| w < -TAU_PSD * total) {
            return domain(format!("negative weight {w:.3e}"));
        }
        let mut kept: Vec<f64> = weights
            .iter()
            .map(|&w| w / total)
            .filter(|&w| w > TAU_ZERO)
            .collect();
        kept.sort_by(|a, b| b.total_cmp(a));
        let kept_total: f64 = kept.iter().sum();
        kept.iter_mut().for_each(|w| *w /= kept_total);
        Ok(Self(kept))
    }

    /// The point mass `(1)`.
    pub fn point_mass() -> Self {
        Self(vec![1.0])
    }

    /// `(1/n, …, 1/n)`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("uniform spectrum needs n ≥ 1");
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest component.
    pub fn first(&self) -> f64 {
        self.0[0]
    }

    /// Component `i` (0-based), zero beyond the stored length.
    pub fn get(&self, i: usize) -> f64 {
        self.0.get(i).copied().unwrap_or(0.0)
    }

    /// Zero-padded copy of length `n`.
    pub fn padded(&self, n: usize) -> Result<Vec<f64>> {
        if self.len() > n {
            return domain(format!(
                "spectrum has {} components, more than {n}",
                self.len()
            ));
        }
        let mut v = self.0.clone();
        v.resize(n, 0.0);
        Ok(v)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_hermitian(TAU_HERM) {
            return domain(format!(
                "density matrix not Hermitian (defect {:.3e})",
                m.hermitian_defect()
            ));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TAU_TR || tr.im.abs() > TAU_TR {
            return domain(format!("density matrix has trace {tr}"));
        }
        let eig = eig_unchecked(m.hermitian_part());
        if let Some(&low) = eig.values.last() {
            if low < -TAU_PSD {
                return domain(format!("density matrix has eigenvalue {low:.3e}"));
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self(ComplexMatrix::outer(psi.amplitudes()))
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("dimension must be positive");
        }
        Ok(Self(ComplexMatrix::from_real_diagonal(&vec![
            1.0 / n as f64;
            n
        ])))
    }

    /// Diagonal state in the computational basis.
    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(p))
    }

    /// `∑ p_i |v_i⟩⟨v_i|` for orthonormal columns `v_i` of `basis`.
    pub fn from_eigensystem(p: &[f64], basis: &ComplexMatrix) -> Result<Self> {
        if p.len() > basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: p.len(),
            });
        }
        let mut diag = p.to_vec();
        diag.resize(basis.dim(), 0.0);
        Self::new(ComplexMatrix::from_real_diagonal(&diag).conjugate_by(basis))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn eig(&self) -> HermitianEigen {
        eig_unchecked(self.0.hermitian_part())
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dim(self.dim(), u.dim())?;
        Ok(Self(self.0.conjugate_by(u)))
    }

    /// `ρ ⊗ σ`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(Vec<C64>);

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return domain("state vector is empty");
        }
        let n2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !n2.is_finite() || (n2 - 1.0).abs() > TAU_NORM {
            return domain(format!("state vector has squared norm {n2}"));
        }
        Ok(Self(amplitudes))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(n2 > 0.0) || !n2.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        let inv = 1.0 / n2.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(Self(amplitudes))
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return domain(format!("basis index {index} out of range for dim {dim}"));
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[index] = C64::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `(u1 ⊗ u2) |ψ⟩`.
    pub fn apply_local(&self, split: BipartiteSplit, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<Self> {
        check_dim(split.dim(), self.dim())?;
        check_dim(split.d1(), u1.dim())?;
        check_dim(split.d2(), u2.dim())?;
        let psi = self.amplitude_matrix(split);
        let out = u1.as_dmatrix() * psi * u2.as_dmatrix().transpose();
        Ok(Self(out.transpose().iter().copied().collect()))
    }

    /// Amplitudes as a `d1 × d2` matrix `Ψ[i1, i2]`.
    pub(crate) fn amplitude_matrix(&self, split: BipartiteSplit) -> DMatrix<C64> {
        DMatrix::from_row_slice(split.d1(), split.d2(), &self.0)
    }

    /// Reduced state of one factor.
    pub fn reduced(&self, split: BipartiteSplit, keep: Subsystem) -> Result<DensityMatrix> {
        check_dim(split.dim(), self.dim())?;
        let psi = self.amplitude_matrix(split);
        let m = match keep {
            Subsystem::First => &psi * psi.adjoint(),
            Subsystem::Second => (psi.adjoint() * &psi).transpose(),
        };
        Ok(DensityMatrix(ComplexMatrix::wrap(m)))
    }
}

/// Nonzero eigenvalues of `ρ` above `τ_zero`, descending, renormalized.
pub fn spectrum(rho: &DensityMatrix) -> Spectrum {
    let values = rho.eig().values;
    Spectrum::from_weights(&values).expect("a density matrix has positive trace")
}

/// Traces out the factor that is not `keep`.
pub fn partial_trace(
    rho: &DensityMatrix,
    split: BipartiteSplit,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    check_dim(split.dim(), rho.dim())?;
    let (d1, d2) = (split.d1(), split.d2());
    let m = rho.matrix().as_dmatrix();
    let out = match keep {
        Subsystem::First => DMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Subsystem::Second => DMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    };
    Ok(DensityMatrix(ComplexMatrix::wrap(out)))
}

/// Transpose on one factor, `(|i1 i2⟩⟨j1 j2|)^{T1} = |j1 i2⟩⟨i1 j2|`.
pub fn partial_transpose(
    rho: &DensityMatrix,
    split: BipartiteSplit,
    on: Subsystem,
) -> Result<ComplexMatrix> {
    check_dim(split.dim(), rho.dim())?;
    let d2 = split.d2();
    let m = rho.matrix().as_dmatrix();
    let n = split.dim();
    let out = DMatrix::from_fn(n, n, |r, c| {
        let (i1, i2) = (r / d2, r % d2);
        let (j1, j2) = (c / d2, c % d2);
        match on {
            Subsystem::First => m[(j1 * d2 + i2, i1 * d2 + j2)],
            Subsystem::Second => m[(i1 * d2 + j2, j1 * d2 + i2)],
        }
    });
    Ok(ComplexMatrix::wrap(out))
}

/// A purification together with the `system ⊗ ancilla` split it lives on.
#[derive(Debug, Clone)]
pub struct Purification {
    pub state: PureState,
    pub split: BipartiteSplit,
}

/// `|ψ⟩ = ∑_m √μ_m |m⟩|m̃⟩` over the eigen-decomposition of `ρ`. The ancilla
/// has dimension equal to the rank of `ρ` (eigenvalues above `τ_zero`).
pub fn purify(rho: &DensityMatrix) -> Purification {
    let eig = rho.eig();
    let n = rho.dim();
    let kept: Vec<usize> = (0..n).filter(|&m| eig.values[m] > TAU_ZERO).collect();
    let rank = kept.len().max(1);
    let total: f64 = kept.iter().map(|&m| eig.values[m]).sum();
    let mut amps = vec![C64::new(0.0, 0.0); n * rank];
    for (slot, &m) in kept.iter().enumerate() {
        let w = (eig.values[m] / total).sqrt();
        for i in 0..n {
            amps[i * rank + slot] = eig.vectors.get(i, m) * w;
        }
    }
    let split = BipartiteSplit { d1: n, d2: rank };
    Purification {
        state: PureState(amps),
        split,
    }
}

/// Squared Schmidt coefficients of `ψ` across `split`, i.e. the spectrum of
/// its reduced state on factor 1.
pub fn schmidt(psi: &PureState, split: BipartiteSplit) -> Result<Spectrum> {
    let smaller = if split.d1() <= split.d2() {
        Subsystem::First
    } else {
        Subsystem::Second
    };
    Ok(spectrum(&psi.reduced(split, smaller)?))
}
