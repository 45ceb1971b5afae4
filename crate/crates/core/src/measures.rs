//! Entanglement inside the bipartite system `A`, and the cap that the
//! spectrum of a two-qubit state puts on it.
//!
//! Entanglement of formation is evaluated exactly through the concurrence and
//! therefore only on two qubits. Other dimensions use the negativity.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use rand::Rng;

use crate::bounds::v;
use crate::error::{check_dim, domain, Error, Result};
use crate::qcore::random::{complex_gaussian, random_unitary};
use crate::qcore::{
    hermitian_eig, matrix_sqrt_psd, partial_transpose, shannon_entropy, spectrum, BipartiteSplit,
    ComplexMatrix, DensityMatrix, Spectrum, Subsystem, C64,
};
use crate::LN2;

/// Which monotone an [`EntanglementResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureTag {
    /// Entanglement of formation, in nats.
    EntanglementOfFormation,
    /// Negativity `(‖ρ^{T1}‖₁ − 1)/2`, dimensionless.
    Negativity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub value: f64,
    pub measure: MeasureTag,
}

/// Entanglement of `A1 : A2`. Two qubits get the entanglement of formation,
/// every other split the negativity.
pub fn internal_entanglement(
    rho: &DensityMatrix,
    split: BipartiteSplit,
) -> Result<EntanglementResult> {
    check_dim(split.dim(), rho.dim())?;
    if split == BipartiteSplit::qubits() {
        Ok(EntanglementResult {
            value: entanglement_of_formation(rho)?,
            measure: MeasureTag::EntanglementOfFormation,
        })
    } else {
        Ok(EntanglementResult {
            value: negativity(rho, split)?,
            measure: MeasureTag::Negativity,
        })
    }
}

/// `σ_y ⊗ σ_y`, which is real: `−1` on the anti-diagonal corners and `+1`
/// on the inner anti-diagonal.
fn spin_flip() -> Matrix4<C64> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    Matrix4::new(
        zero, zero, zero, -one, //
        zero, zero, one, zero, //
        zero, one, zero, zero, //
        -one, zero, zero, zero,
    )
}

/// Two-qubit concurrence `max{0, μ1 − μ2 − μ3 − μ4}`.
///
/// The `μ_i` are the square roots of the eigenvalues of `ρ (Y⊗Y) ρ* (Y⊗Y)`,
/// obtained here as the singular values of `√ρ (Y⊗Y) √ρ*`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_dim(4, rho.dim())?;
    let r = matrix_sqrt_psd(rho.matrix())?;
    let r = r.as_dmatrix();
    let flip = DMatrix::from_fn(4, 4, |i, j| spin_flip()[(i, j)]);
    let k = r * flip * r.map(|z| z.conj());
    Ok(concurrence_from_singular_values(k.singular_values().as_slice()).max(0.0))
}

/// `μ1 − μ2 − μ3 − μ4` without clamping.
fn concurrence_from_singular_values(sv: &[f64]) -> f64 {
    let mut mu = sv.to_vec();
    mu.sort_by(|a, b| b.total_cmp(a));
    mu[0] - mu[1..].iter().sum::<f64>()
}

/// `E_f(ρ) = v(C(ρ))` for two qubits.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    v(concurrence(rho)?)
}

/// `(‖ρ^{T1}‖₁ − 1) / 2`.
pub fn negativity(rho: &DensityMatrix, split: BipartiteSplit) -> Result<f64> {
    let pt = partial_transpose(rho, split, Subsystem::First)?;
    let eig = hermitian_eig(&pt)?;
    let trace_norm: f64 = eig.values.iter().map(|x| x.abs()).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}

/// `max{0, p1 − p3 − 2√(p2 p4)}`: the largest concurrence of a two-qubit state
/// with spectrum `p`.
pub fn max_concurrence(p: &Spectrum) -> Result<f64> {
    let q = p.padded(4)?;
    Ok(max_concurrence_padded(&q))
}

pub(crate) fn max_concurrence_padded(q: &[f64]) -> f64 {
    (q[0] - q[2] - 2.0 * (q[1].max(0.0) * q[3].max(0.0)).sqrt()).max(0.0)
}

/// Spectral entropy `s₂,₂(p) = ln 2 − v(max{0, p1 − p3 − 2√(p2 p4)})`.
pub fn s22_ef(p: &Spectrum) -> Result<f64> {
    Ok(s22_padded(&p.padded(4)?))
}

/// [`s22_ef`] on a zero-padded, descending 4-vector.
pub(crate) fn s22_padded(q: &[f64]) -> f64 {
    LN2 - v(max_concurrence_padded(q).min(1.0)).expect("argument clamped to [0, 1]")
}

/// Eigenbasis of [`max_ef_state`], as columns in order of decreasing weight:
/// `|Φ+⟩`, `|01⟩`, `|Φ−⟩`, `|10⟩`.
///
/// Filling `|Φ±⟩` with `p1, p3` and the product vectors with `p2, p4` gives an
/// X-shaped state whose concurrence is `2(|ρ_{00,11}| − √(ρ_{01,01} ρ_{10,10}))
/// = p1 − p3 − 2√(p2 p4)`. The assignment was checked against the orbit search
/// in [`max_ef_over_spectrum_numeric`]; swapping the roles of `p2` and `p3`
/// falls short of the optimum.
pub fn max_ef_basis() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    // rows: |00⟩ |01⟩ |10⟩ |11⟩; columns: Φ+, |01⟩, Φ−, |10⟩
    ComplexMatrix::from_row_major(
        4,
        &[
            r(s), z, r(s), z, //
            z, r(1.0), z, z, //
            z, z, z, r(1.0), //
            r(s), z, r(-s), z,
        ],
    )
    .expect("constant basis is finite and square")
}

/// A two-qubit state with spectrum `p` and the largest entanglement of
/// formation that spectrum allows, `ln 2 − s₂,₂(p)`.
pub fn max_ef_state(p: &Spectrum) -> Result<DensityMatrix> {
    let q = p.padded(4)?;
    let rho = DensityMatrix::from_eigensystem(&q, &max_ef_basis())?;
    let got = spectrum(&rho);
    let mismatch = (0..4).map(|i| (got.get(i) - p.get(i)).abs()).fold(0.0, f64::max);
    if mismatch > 1e-9 {
        return Err(Error::Internal(format!(
            "constructed state has spectrum off by {mismatch:.3e}"
        )));
    }
    Ok(rho)
}

/// Budget of the unitary-orbit local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSearch {
    pub restarts: usize,
    pub iters: usize,
    /// Initial rotation angle scale.
    pub step: f64,
    /// Factor applied to the step after `patience` consecutive rejections.
    pub decay: f64,
    pub patience: usize,
}

impl Default for OrbitSearch {
    fn default() -> Self {
        Self {
            restarts: 20,
            iters: 2000,
            step: 0.1,
            decay: 0.5,
            patience: 50,
        }
    }
}

/// Best entanglement of formation found on the unitary orbit
/// `{U diag(p) U†}` by random-restart accept-if-improve search.
///
/// Each restart starts from a Haar unitary and proposes `U ← U exp(i ε H)`
/// with `H` a random Hermitian direction of unit Frobenius norm. The search
/// ranks candidates by the unclamped `μ1 − μ2 − μ3 − μ4`, which keeps moving
/// where the concurrence itself is flat at zero. The best point of every
/// restart is polished by a pattern search along a fixed Hermitian basis and
/// re-evaluated through [`entanglement_of_formation`].
pub fn max_ef_over_spectrum_numeric<R: Rng + ?Sized>(
    p: &Spectrum,
    search: &OrbitSearch,
    rng: &mut R,
) -> Result<f64> {
    let q = p.padded(4)?;
    if search.restarts == 0 {
        return domain("orbit search needs at least one restart");
    }
    let sqrt_d = Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| {
        C64::new(q[i].sqrt(), 0.0)
    }));
    let flip = spin_flip();
    let score = |u: &Matrix4<C64>| -> f64 {
        let t = u.transpose() * flip * u;
        let a = sqrt_d * t * sqrt_d;
        concurrence_from_singular_values(a.singular_values().as_slice())
    };

    let mut best = 0.0_f64;
    for _ in 0..search.restarts {
        let u0 = random_unitary(4, rng);
        let mut u = Matrix4::from_fn(|i, j| u0.get(i, j));
        let mut current = score(&u);
        let mut step = search.step;
        let mut rejected = 0;
        for _ in 0..search.iters {
            let candidate = u * unitary_step(step, rng);
            let s = score(&candidate);
            if s > current {
                u = candidate;
                current = s;
                rejected = 0;
            } else {
                rejected += 1;
                if rejected >= search.patience {
                    step *= search.decay;
                    rejected = 0;
                }
            }
        }
        polish(&mut u, &mut current, step.max(1e-3), &score);
        let unitary = ComplexMatrix::from_row_major(4, u.transpose().as_slice())?;
        let rho = DensityMatrix::from_eigensystem(&q, &unitary)?;
        best = best.max(entanglement_of_formation(&rho)?);
    }
    Ok(best)
}

/// Pattern search along the 16 elementary Hermitian directions, halving the
/// angle when no direction improves.
fn polish(u: &mut Matrix4<C64>, current: &mut f64, mut step: f64, score: &impl Fn(&Matrix4<C64>) -> f64) {
    let generators = hermitian_basis();
    let mut moves: Vec<Matrix4<C64>> = Vec::new();
    while step > 1e-9 {
        moves.clear();
        for g in &generators {
            moves.push(exp_i_hermitian(g, step));
            moves.push(exp_i_hermitian(g, -step));
        }
        let mut improved = true;
        let mut sweeps = 0;
        while improved && sweeps < 200 {
            improved = false;
            sweeps += 1;
            for m in &moves {
                let candidate = *u * m;
                let s = score(&candidate);
                if s > *current {
                    *u = candidate;
                    *current = s;
                    improved = true;
                }
            }
        }
        step *= 0.5;
    }
}

/// Unit-norm basis of 4 × 4 Hermitian matrices.
fn hermitian_basis() -> Vec<Matrix4<C64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        out.push(Matrix4::from_fn(|a, b| C64::new(if a == i && b == i { 1.0 } else { 0.0 }, 0.0)));
        for j in i + 1..4 {
            out.push(Matrix4::from_fn(|a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) { C64::new(s, 0.0) } else { C64::new(0.0, 0.0) }
            }));
            out.push(Matrix4::from_fn(|a, b| {
                if (a, b) == (i, j) {
                    C64::new(0.0, -s)
                } else if (a, b) == (j, i) {
                    C64::new(0.0, s)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    out
}

fn exp_i_hermitian(h: &Matrix4<C64>, eps: f64) -> Matrix4<C64> {
    let eig = SymmetricEigen::new(*h);
    let phases = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, eps * l)));
    eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `exp(i ε H)` for a random unit-norm Hermitian `H`.
fn unitary_step<R: Rng + ?Sized>(eps: f64, rng: &mut R) -> Matrix4<C64> {
    let g = Matrix4::from_fn(|_, _| complex_gaussian(rng));
    let h = (g + g.adjoint()) * C64::new(0.5, 0.0);
    exp_i_hermitian(&h.unscale(h.norm()), eps)
}

/// Purity test `P(p) ≤ 1/(d − 1)`: every state of a `d`-dimensional
/// bipartite system with this spectrum is separable.
pub fn is_zhsl_separable(p: &Spectrum, d: usize) -> bool {
    if p.len() > d {
        return false;
    }
    if d < 2 {
        return true;
    }
    crate::qcore::purity(p) <= 1.0 / (d as f64 - 1.0)
}

/// Absolute separability on `2 × d`: `p1 ≤ p_{2d−1} + 2√(p_{2d−2} p_{2d})`
/// (1-based, zero padded).
pub fn is_abs_separable_2xd(p: &Spectrum, d: usize) -> bool {
    let n = 2 * d;
    if d == 0 || p.len() > n {
        return false;
    }
    if d == 1 {
        // a 2 × 1 system has no entanglement
        return true;
    }
    p.first() <= p.get(n - 2) + 2.0 * (p.get(n - 3) * p.get(n - 1)).sqrt()
}

/// Upper bound on the entanglement of formation from the eigen-decomposition
/// of `ρ`: `∑_k λ_k S(tr₂ |v_k⟩⟨v_k|)`. Valid for any split.
pub fn ef_eigen_decomposition_bound(rho: &DensityMatrix, split: BipartiteSplit) -> Result<f64> {
    check_dim(split.dim(), rho.dim())?;
    let eig = rho.eig();
    let mut total = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= crate::qcore::TAU_ZERO {
            continue;
        }
        let psi = crate::qcore::PureState::normalized(eig.vectors.column(k))?;
        let local = crate::qcore::schmidt(&psi, split)?;
        total += lambda * shannon_entropy(&local);
    }
    Ok(total)
}

/// Lower bound on the entanglement of formation of a `2 × d` state.
///
/// Factor 2 is compressed to a qubit by the local channel with Kraus
/// operators `K_i = |0⟩⟨2i| + |1⟩⟨2i+1|` (plus `|0⟩⟨d−1|` when `d` is odd);
/// local channels cannot raise `E_f`, and the two-qubit image is evaluated
/// exactly.
pub fn ef_block_compression_bound(rho: &DensityMatrix, split: BipartiteSplit) -> Result<f64> {
    check_dim(split.dim(), rho.dim())?;
    if split.d1() != 2 {
        return domain(format!("block compression needs d1 = 2, got {}", split.d1()));
    }
    let d2 = split.d2();
    let m = rho.matrix().as_dmatrix();
    // target index of each basis vector of factor 2
    let target = |k: usize| if k + 1 == d2 && d2 % 2 == 1 { 0 } else { k % 2 };
    let block = |k: usize| k / 2;
    let mut out = DMatrix::<C64>::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for k in 0..d2 {
                for l in 0..d2 {
                    if block(k) != block(l) {
                        continue;
                    }
                    out[(a * 2 + target(k), b * 2 + target(l))] += m[(a * d2 + k, b * d2 + l)];
                }
            }
        }
    }
    let compressed = DensityMatrix::new(ComplexMatrix::from_dmatrix(out)?)?;
    entanglement_of_formation(&compressed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::stream_rng;
    use crate::qcore::{random_density, PureState};

    fn bell_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| C64::new(x, 0.0);
        PureState::new(vec![c(s), c(0.0), c(0.0), c(s)]).unwrap().projector()
    }

    fn singlet_werner(w: f64) -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| C64::new(x, 0.0);
        let singlet = PureState::new(vec![c(0.0), c(s), c(-s), c(0.0)]).unwrap();
        let m = singlet.projector().matrix().as_dmatrix() * C64::new(w, 0.0)
            + DMatrix::<C64>::identity(4, 4) * C64::new((1.0 - w) / 4.0, 0.0);
        DensityMatrix::new(ComplexMatrix::from_dmatrix(m).unwrap()).unwrap()
    }

    /// Binary entropy of (1 ± √(1 − C²))/2, written out independently of `v`.
    fn ef_reference(c: f64) -> f64 {
        let a = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
        let b = 1.0 - a;
        let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
        term(a) + term(b)
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell_state()).unwrap() - 1.0).abs() < 1e-7);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed(4).unwrap()).unwrap(), 0.0);
        // Werner: C = max{0, (3w − 1)/2}
        assert!((concurrence(&singlet_werner(0.8)).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(concurrence(&singlet_werner(0.3)).unwrap(), 0.0);
        assert!(concurrence(&DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn werner_negativity_consistent() {
        // ρ^{T1} of the Werner state has smallest eigenvalue (1 − 3w)/4
        for w in [0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let n = negativity(&singlet_werner(w), BipartiteSplit::qubits()).unwrap();
            let expected = ((3.0 * w - 1.0) / 4.0_f64).max(0.0);
            assert!((n - expected).abs() < 1e-12, "w = {w}");
        }
    }

    #[test]
    fn ef_examples() {
        assert!((entanglement_of_formation(&bell_state()).unwrap() - LN2).abs() < 1e-9);
        let sep = DensityMatrix::from_diagonal(&[0.4, 0.1, 0.3, 0.2]).unwrap();
        assert_eq!(entanglement_of_formation(&sep).unwrap(), 0.0);
        // C = 0.5 through a Werner state with w = 2/3
        let e = entanglement_of_formation(&singlet_werner(2.0 / 3.0)).unwrap();
        assert!((e - ef_reference(0.5)).abs() < 1e-12);
        assert!((e - 0.2458).abs() < 2e-4);
    }

    #[test]
    fn negativity_examples() {
        let q = BipartiteSplit::qubits();
        let prod = PureState::basis(4, 1).unwrap().projector();
        assert!(negativity(&prod, q).unwrap() < 1e-15);
        assert!((negativity(&bell_state(), q).unwrap() - 0.5).abs() < 1e-14);
        assert!(negativity(&DensityMatrix::maximally_mixed(4).unwrap(), q).unwrap() < 1e-15);
        assert!(negativity(&bell_state(), BipartiteSplit::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn s22_examples() {
        assert!(s22_ef(&Spectrum::point_mass()).unwrap().abs() < 1e-15);
        assert!((s22_ef(&Spectrum::uniform(4).unwrap()).unwrap() - LN2).abs() < 1e-15);
        let half = Spectrum::uniform(2).unwrap();
        assert!((s22_ef(&half).unwrap() - (LN2 - ef_reference(0.5))).abs() < 1e-14);
        assert!((s22_ef(&half).unwrap() - 0.4473).abs() < 2e-4);
        assert!(s22_ef(&Spectrum::uniform(5).unwrap()).is_err());
    }

    #[test]
    fn max_ef_state_examples() {
        let e = |p: &[f64]| {
            entanglement_of_formation(&max_ef_state(&Spectrum::new(p.to_vec()).unwrap()).unwrap())
                .unwrap()
        };
        assert!((e(&[1.0]) - LN2).abs() < 1e-9);
        assert!(e(&[0.25; 4]).abs() < 1e-12);
        // (0.6, 0.4): p1 − p3 − 2√(p2 p4) = 0.6
        let rho = max_ef_state(&Spectrum::new(vec![0.6, 0.4]).unwrap()).unwrap();
        assert!((concurrence(&rho).unwrap() - 0.6).abs() < 1e-9);
    }

    #[test]
    fn swapped_assignment_is_not_optimal() {
        // giving p2 to Φ− instead of p3 loses concurrence for (0.5, 0.3, 0.2)
        let basis = max_ef_basis();
        let p = [0.5, 0.3, 0.2, 0.0];
        let swapped = [p[0], p[2], p[1], p[3]];
        let good = DensityMatrix::from_eigensystem(&p, &basis).unwrap();
        let bad = DensityMatrix::from_eigensystem(&swapped, &basis).unwrap();
        assert!(concurrence(&good).unwrap() > concurrence(&bad).unwrap() + 0.05);
    }

    #[test]
    fn orbit_search_examples() {
        let mut rng = stream_rng(3, 0);
        let search = OrbitSearch::default();
        let pure = max_ef_over_spectrum_numeric(&Spectrum::point_mass(), &search, &mut rng).unwrap();
        assert!((pure - LN2).abs() < 1e-6, "{pure}");
        let mixed = max_ef_over_spectrum_numeric(&Spectrum::uniform(4).unwrap(), &search, &mut rng).unwrap();
        assert_eq!(mixed, 0.0);
        let half = max_ef_over_spectrum_numeric(&Spectrum::uniform(2).unwrap(), &search, &mut rng).unwrap();
        assert!((half - ef_reference(0.5)).abs() < 1e-3, "{half}");
        assert!(half <= ef_reference(0.5) + 1e-9);
    }

    #[test]
    fn orbit_search_agrees_with_construction() {
        // brute force over random orbits: the analytic construction must match the best found
        let mut rng = stream_rng(4, 0);
        for p in [vec![0.6, 0.4], vec![0.5, 0.3, 0.2], vec![0.7, 0.1, 0.1, 0.1]] {
            let p = Spectrum::new(p).unwrap();
            let numeric = max_ef_over_spectrum_numeric(&p, &OrbitSearch::default(), &mut rng).unwrap();
            let built = entanglement_of_formation(&max_ef_state(&p).unwrap()).unwrap();
            assert!((numeric - built).abs() < 1e-3, "{p:?}: {numeric} vs {built}");
        }
    }

    #[test]
    fn separability_tests() {
        assert!(is_zhsl_separable(&Spectrum::uniform(4).unwrap(), 4));
        assert!(!is_zhsl_separable(&Spectrum::point_mass(), 4));
        let p = Spectrum::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!(is_abs_separable_2xd(&p, 2));
        let q = Spectrum::new(vec![0.9, 0.1]).unwrap();
        assert!(!is_abs_separable_2xd(&q, 2));
    }

    #[test]
    fn ppt_matches_zero_ef_on_random_states() {
        let mut rng = stream_rng(12, 0);
        for _ in 0..1000 {
            let rho = random_density(4, 4, &mut rng).unwrap();
            let ef = entanglement_of_formation(&rho).unwrap();
            let neg = negativity(&rho, BipartiteSplit::qubits()).unwrap();
            assert_eq!(ef <= 1e-9, neg <= 1e-9, "E_f {ef}, N {neg}");
        }
    }

    #[test]
    fn internal_entanglement_picks_measure() {
        let r = internal_entanglement(&bell_state(), BipartiteSplit::qubits()).unwrap();
        assert_eq!(r.measure, MeasureTag::EntanglementOfFormation);
        let mm = DensityMatrix::maximally_mixed(6).unwrap();
        let r = internal_entanglement(&mm, BipartiteSplit::ordered(2, 3).unwrap()).unwrap();
        assert_eq!(r.measure, MeasureTag::Negativity);
        assert_eq!(r.value, 0.0);
    }
}
