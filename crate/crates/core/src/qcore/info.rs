use super::linalg::{hermitian_eig, matrix_sqrt_psd};
use super::state::{spectrum, DensityMatrix, Spectrum};
use crate::error::{check_dim, domain, Result};
use super::TAU_ZERO;

/// `x ln x` with `0 ln 0 = 0`.
pub fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `S(ρ) = −∑ λ ln λ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&spectrum(rho))
}

/// `h(p) = −∑ p_i ln p_i` in nats.
pub fn shannon_entropy(p: &Spectrum) -> f64 {
    -p.as_slice().iter().map(|&x| xlnx(x)).sum::<f64>()
}

/// `P(p) = ∑ p_i²`.
pub fn purity(p: &Spectrum) -> f64 {
    p.as_slice().iter().map(|x| x * x).sum()
}

/// Rényi entropy of order `alpha > 0`; `alpha = 1` is the Shannon entropy.
pub fn renyi_entropy(p: &Spectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("Rényi order {alpha} must be positive and finite"));
    }
    if (alpha - 1.0).abs() < 1e-12 {
        return Ok(shannon_entropy(p));
    }
    let s: f64 = p.as_slice().iter().map(|x| x.powf(alpha)).sum();
    Ok(s.ln() / (1.0 - alpha))
}

/// Slack allowed on partial sums when comparing in [`majorizes`].
const MAJORIZATION_TOL: f64 = 1e-12;

/// True iff every partial sum of `p` dominates the matching partial sum of
/// `q`, the shorter vector being padded with zeros.
pub fn majorizes(p: &Spectrum, q: &Spectrum) -> bool {
    let n = p.len().max(q.len());
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..n {
        sp += p.get(k);
        sq += q.get(k);
        if sp < sq - MAJORIZATION_TOL {
            return false;
        }
    }
    true
}

/// Uhlmann fidelity `tr √(√ρ σ √ρ)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let r = matrix_sqrt_psd(rho.matrix())?;
    let inner = sigma.matrix().conjugate_by(&r);
    let eig = hermitian_eig(&inner)?;
    Ok(eig
        .values
        .iter()
        .filter(|&&x| x > TAU_ZERO)
        .map(|&x| x.sqrt())
        .sum::<f64>()
        .min(1.0))
}

/// `D_B(ρ, σ) = (2 − 2 tr √(√ρ σ √ρ))^{1/2}`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * fidelity(rho, sigma)?).max(0.0).sqrt())
}

/// `tr(√ρ √σ)`.
pub fn hellinger_affinity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let a = matrix_sqrt_psd(rho.matrix())?;
    let b = matrix_sqrt_psd(sigma.matrix())?;
    Ok(a.mul(&b).trace().re.min(1.0))
}

/// `D_H(ρ, σ) = (2 − 2 tr √ρ √σ)^{1/2}`.
pub fn hellinger_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * hellinger_affinity(rho, sigma)?).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum_of(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropies_of_uniform() {
        let u = Spectrum::uniform(4).unwrap();
        assert!((shannon_entropy(&u) - 4f64.ln()).abs() < 1e-15);
        assert!((purity(&u) - 0.25).abs() < 1e-15);
        assert!((renyi_entropy(&u, 0.5).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!(renyi_entropy(&u, 0.0).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let mm = DensityMatrix::maximally_mixed(4).unwrap();
        assert!((von_neumann_entropy(&mm) - 4f64.ln()).abs() < 1e-14);
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&half) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn majorization_extremes() {
        let point = Spectrum::point_mass();
        let u = Spectrum::uniform(4).unwrap();
        let p = spectrum_of(&[0.5, 0.3, 0.2]);
        assert!(majorizes(&point, &p));
        assert!(majorizes(&point, &u));
        assert!(majorizes(&p, &u));
        assert!(!majorizes(&u, &p));
        // incomparable pair
        let a = spectrum_of(&[0.6, 0.2, 0.2]);
        let b = spectrum_of(&[0.5, 0.45, 0.05]);
        assert!(!majorizes(&a, &b) && !majorizes(&b, &a));
    }

    #[test]
    fn distance_examples() {
        let rho = DensityMatrix::from_diagonal(&[0.3, 0.7]).unwrap();
        assert!(bures_distance(&rho, &rho).unwrap() < 1e-7);
        assert!(hellinger_distance(&rho, &rho).unwrap() < 1e-7);

        let zero = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let one = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!((hellinger_distance(&zero, &one).unwrap() - 2f64.sqrt()).abs() < 1e-12);

        // F(I/2, |0⟩⟨0|) = √(1/2)
        let mm = DensityMatrix::maximally_mixed(2).unwrap();
        let expected = (2.0 - 2.0 * 0.5f64.sqrt()).sqrt();
        assert!((bures_distance(&mm, &zero).unwrap() - expected).abs() < 1e-12);
        assert!((bures_distance(&zero, &mm).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.7654).abs() < 1e-4);
    }
}
