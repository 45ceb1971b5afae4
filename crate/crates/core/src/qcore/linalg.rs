use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{TAU_HERM, TAU_PSD, TAU_ZERO};
use crate::error::{check_dim, domain, Result};

pub type C64 = Complex64;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim * dim, entries.len())?;
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return domain(format!("matrix is {}×{}, not square", m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return domain("matrix has zero dimension");
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("matrix has non-finite entries");
        }
        Ok(Self(m))
    }

    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// `|v⟩⟨v|` without normalization.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// Kronecker product, `self` being the major (first) factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Largest entry of `|M - M†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Hermitian within `tol`, relative to the largest entry (or 1).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.max_abs().max(1.0)
    }

    /// `max |M_ij − N_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `(M + M†) / 2`.
    pub(crate) fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0)
    }
}

/// Eigen-decomposition `M = V diag(values) V†` of a Hermitian matrix with
/// eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, ordered as `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V diag(g(λ)) V†`.
    pub fn map_values(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.vectors.as_dmatrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let gj = g(lambda);
            for i in 0..n {
                scaled[(i, j)] *= gj;
            }
        }
        ComplexMatrix::wrap(scaled * v.adjoint())
    }
}

/// Eigenvalues (descending) and an orthonormal eigenbasis of a Hermitian
/// matrix. Degenerate eigenspaces come back in an arbitrary orthonormal basis.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_hermitian(TAU_HERM) {
        return domain(format!(
            "matrix is not Hermitian (defect {:.3e})",
            m.hermitian_defect()
        ));
    }
    Ok(eig_unchecked(m.hermitian_part()))
}

pub(crate) fn eig_unchecked(h: DMatrix<C64>) -> HermitianEigen {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen {
        values,
        vectors: ComplexMatrix::wrap(vectors),
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in `[-τ_psd, 0)` are treated as zero.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let scale = m.max_abs().max(1.0);
    if let Some(&low) = eig.values.last() {
        if low < -TAU_PSD * scale {
            return domain(format!("matrix has negative eigenvalue {low:.3e}"));
        }
    }
    // eigenvalues at rounding level would contribute their square roots
    Ok(eig.map_values(|x| if x > TAU_ZERO * scale { x.sqrt() } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values.len(), 2);
        for v in e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_keeps_basis() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[0.3, 0.7])).unwrap();
        assert!((e.values[0] - 0.7).abs() < 1e-15);
        assert!((e.values[1] - 0.3).abs() < 1e-15);
        // 0.7 sits on |1⟩, so the first eigenvector is ±|1⟩ up to phase
        assert!((e.vectors.get(1, 0).norm() - 1.0).abs() < 1e-14);
        assert!(e.vectors.get(0, 0).norm() < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        // det(X - λ) = λ² - 1
        let x = ComplexMatrix::from_row_major(2, &[c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let m = ComplexMatrix::from_row_major(
            3,
            &[
                c(2.0),
                C64::new(0.5, -0.25),
                C64::new(0.0, 1.0),
                C64::new(0.5, 0.25),
                c(-1.0),
                c(0.3),
                C64::new(0.0, -1.0),
                c(0.3),
                c(0.5),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&m).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(e.map_values(|x| x).max_abs_diff(&m) < 1e-12);
        let v = &e.vectors;
        assert!(v.adjoint().mul(v).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_row_major(2, &[c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn sqrt_squares_back() {
        let m = ComplexMatrix::from_row_major(
            2,
            &[c(0.5), C64::new(0.2, 0.1), C64::new(0.2, -0.1), c(0.5)],
        )
        .unwrap();
        let r = matrix_sqrt_psd(&m).unwrap();
        assert!(r.mul(&r).max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
        assert!(matrix_sqrt_psd(&m).is_err());
    }

    #[test]
    fn non_square_rejected() {
        assert!(ComplexMatrix::from_dmatrix(DMatrix::zeros(2, 3)).is_err());
    }
}
