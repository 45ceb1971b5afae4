//! Correlation monotones between `A` and an external system `B`.
//!
//! The mutual information is computed exactly. The distance-based monotones
//! `C^(D)(ρ) = inf D(ρ, δ_A ⊗ δ_B)` are exact on pure states through their
//! spectral function `f`, and approximated from above elsewhere by an
//! alternating local search over product states.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{check_dim, domain, Error, Result};
use crate::qcore::linalg::eig_unchecked;
use crate::qcore::random::complex_gaussian;
use crate::qcore::{
    bures_distance, hellinger_distance, partial_trace, schmidt, shannon_entropy,
    von_neumann_entropy, BipartiteSplit, ComplexMatrix, DensityMatrix, PureState, Spectrum,
    Subsystem, C64, TAU_ZERO,
};

/// A correlation monotone together with its spectral functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonotoneKind {
    MutualInformation,
    Bures,
    Hellinger,
}

impl MonotoneKind {
    pub const ALL: [MonotoneKind; 3] = [Self::MutualInformation, Self::Bures, Self::Hellinger];

    pub fn name(self) -> &'static str {
        match self {
            Self::MutualInformation => "mutual_information",
            Self::Bures => "bures",
            Self::Hellinger => "hellinger",
        }
    }

    /// `f` with `C(|ψ⟩⟨ψ|) = f(schmidt(ψ))`.
    pub fn f(self, p: &Spectrum) -> f64 {
        match self {
            Self::MutualInformation => f_mi(p),
            Self::Bures => f_db(p),
            Self::Hellinger => f_dh(p),
        }
    }

    /// `f̃` with `C(ρ_pc) = f̃(p)` on strictly correlated classical states.
    pub fn f_tilde(self, p: &Spectrum) -> f64 {
        f_tilde(self, p)
    }

    /// Supremum of `f` on spectra of length `d`, attained only at the uniform
    /// spectrum.
    pub fn c_max(self, d: usize) -> f64 {
        let n = d.max(1) as f64;
        match self {
            Self::MutualInformation => 2.0 * n.ln(),
            Self::Bures => (2.0 * (1.0 - 1.0 / n.sqrt())).max(0.0).sqrt(),
            Self::Hellinger => (2.0 * (1.0 - 1.0 / n)).max(0.0).sqrt(),
        }
    }

    /// `f̃` at the uniform spectrum of length `d`.
    pub fn c_tilde_max(self, d: usize) -> Result<f64> {
        Ok(self.f_tilde(&Spectrum::uniform(d.max(1))?))
    }
}

impl fmt::Display for MonotoneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonotoneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mutual_information" | "mutual-information" | "mi" => Ok(Self::MutualInformation),
            "bures" => Ok(Self::Bures),
            "hellinger" => Ok(Self::Hellinger),
            other => domain(format!("unknown monotone `{other}`")),
        }
    }
}

/// `S(ρ_A) + S(ρ_B) − S(ρ)` in nats.
pub fn mutual_information(rho: &DensityMatrix, split: BipartiteSplit) -> Result<f64> {
    check_dim(split.dim(), rho.dim())?;
    let a = partial_trace(rho, split, Subsystem::First)?;
    let b = partial_trace(rho, split, Subsystem::Second)?;
    let value = von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho);
    Ok(value.max(0.0))
}

/// `√(2(1 − √p1))`.
pub fn f_db(p: &Spectrum) -> f64 {
    (2.0 * (1.0 - p.first().sqrt())).max(0.0).sqrt()
}

/// `√(2(1 − p1))`.
pub fn f_dh(p: &Spectrum) -> f64 {
    (2.0 * (1.0 - p.first())).max(0.0).sqrt()
}

/// `2h(p)`.
pub fn f_mi(p: &Spectrum) -> f64 {
    2.0 * shannon_entropy(p)
}

/// Value of the monotone on `Σ p_i |ii⟩⟨ii|`: `h` for the mutual information
/// and `f_db` for both distances (restricting to diagonal product states
/// loses nothing once both sides are dephased).
pub fn f_tilde(kind: MonotoneKind, p: &Spectrum) -> f64 {
    match kind {
        MonotoneKind::MutualInformation => shannon_entropy(p),
        MonotoneKind::Bures | MonotoneKind::Hellinger => f_db(p),
    }
}

/// Exact value of the monotone on a pure state.
pub fn c_on_pure(psi: &PureState, split: BipartiteSplit, kind: MonotoneKind) -> Result<f64> {
    Ok(kind.f(&schmidt(psi, split)?))
}

pub fn c_max(kind: MonotoneKind, d: usize) -> f64 {
    kind.c_max(d)
}

/// Schedule of the product-state search in [`c_distance_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltMin {
    pub restarts: usize,
    /// Alternations between the two factors.
    pub outer: usize,
    /// Local-search steps per factor and alternation.
    pub inner: usize,
    /// Initial perturbation size, relative to a unit-norm factor.
    pub step: f64,
}

impl Default for AltMin {
    fn default() -> Self {
        Self { restarts: 10, outer: 5, inner: 500, step: 0.3 }
    }
}

/// Largest total dimension accepted by [`c_distance_numeric`].
pub const MAX_NUMERIC_DIM: usize = 64;

/// Upper estimate of `inf_{δ_A, δ_B} D(ρ, δ_A ⊗ δ_B)` for the Bures or
/// Hellinger distance.
///
/// Each factor is written `δ = L L† / tr(L L†)` for a complex `L`. The two
/// factors are improved in turn by accept-if-better random perturbations of
/// `L` with a self-adjusting step. The first restart starts from the
/// marginals, the others from random factors. The value returned is the
/// distance to the best product state found, recomputed directly, so it never
/// undercuts the true infimum beyond rounding.
pub fn c_distance_numeric<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    split: BipartiteSplit,
    kind: MonotoneKind,
    schedule: &AltMin,
    rng: &mut R,
) -> Result<f64> {
    check_dim(split.dim(), rho.dim())?;
    if split.dim() > MAX_NUMERIC_DIM {
        return domain(format!("dimension {} above {MAX_NUMERIC_DIM}", split.dim()));
    }
    if kind == MonotoneKind::MutualInformation {
        return domain("mutual information is exact; use mutual_information");
    }
    let (d1, d2) = (split.d1(), split.d2());
    let eig = rho.eig();
    // Bures needs √λ_k on each eigenvector, Hellinger λ_k^{1/4} (it is paired
    // with itself).
    let power = if kind == MonotoneKind::Bures { 0.5 } else { 0.25 };
    let omegas: Vec<DMatrix<C64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > TAU_ZERO)
        .map(|(k, &l)| {
            let col = eig.vectors.column(k);
            let w = l.powf(power);
            DMatrix::from_fn(d1, d2, |i, j| col[i * d2 + j] * w)
        })
        .collect();
    let omegas_t: Vec<DMatrix<C64>> = omegas.iter().map(|m| m.transpose()).collect();

    let marg_a = partial_trace(rho, split, Subsystem::First)?;
    let marg_b = partial_trace(rho, split, Subsystem::Second)?;
    let joint_score = |la: &DMatrix<C64>, lb: &DMatrix<C64>| {
        Phase::new(kind, &omegas, &gram(lb).transpose()).score(&gram(la))
    };

    let mut best: Option<(f64, DMatrix<C64>, DMatrix<C64>)> = None;
    for restart in 0..schedule.restarts.max(1) {
        let (mut la, mut lb) = match restart {
            0 => (psd_factor(marg_a.matrix().as_dmatrix()), psd_factor(marg_b.matrix().as_dmatrix())),
            1 => leading_schmidt_factors(&eig.vectors.column(0), d1, d2),
            _ => (random_factor(d1, rng), random_factor(d2, rng)),
        };
        let mut score = f64::NEG_INFINITY;
        for _ in 0..schedule.outer.max(1) {
            let phase_a = Phase::new(kind, &omegas, &gram(&lb).transpose());
            local_search(&mut la, |l| phase_a.score(&gram(l)), schedule, rng);
            let phase_b = Phase::new(kind, &omegas_t, &gram(&la).transpose());
            local_search(&mut lb, |l| phase_b.score(&gram(l)), schedule, rng);
            // joint moves reach corners that plain alternation only
            // approaches geometrically
            let mut pair = (la, lb);
            score = local_search(&mut pair, |(a, b)| joint_score(a, b), schedule, rng);
            (la, lb) = pair;
        }
        if best.as_ref().is_none_or(|b| score > b.0) {
            best = Some((score, la, lb));
        }
    }
    let (_, la, lb) = best.expect("at least one restart");
    let product = DensityMatrix::new(ComplexMatrix::wrap(gram(&la)).kron(&ComplexMatrix::wrap(gram(&lb))))?;
    match kind {
        MonotoneKind::Bures => bures_distance(rho, &product),
        _ => hellinger_distance(rho, &product),
    }
}

/// Factors that can be perturbed and renormalized by [`local_search`].
trait Factor: Clone {
    fn perturbed<R: Rng + ?Sized>(&self, step: f64, rng: &mut R) -> Self;
}

impl Factor for DMatrix<C64> {
    fn perturbed<R: Rng + ?Sized>(&self, step: f64, rng: &mut R) -> Self {
        let mut out = self + DMatrix::from_fn(self.nrows(), self.ncols(), |_, _| complex_gaussian(rng) * step);
        normalize(&mut out);
        out
    }
}

impl Factor for (DMatrix<C64>, DMatrix<C64>) {
    fn perturbed<R: Rng + ?Sized>(&self, step: f64, rng: &mut R) -> Self {
        (self.0.perturbed(step, rng), self.1.perturbed(step, rng))
    }
}

/// Accept-if-better random search; the step grows on success and shrinks
/// on failure.
fn local_search<F: Factor, R: Rng + ?Sized>(
    state: &mut F,
    score: impl Fn(&F) -> f64,
    schedule: &AltMin,
    rng: &mut R,
) -> f64 {
    let mut current = score(state);
    let mut step = schedule.step;
    for _ in 0..schedule.inner {
        let trial = state.perturbed(step, rng);
        let value = score(&trial);
        if value > current {
            *state = trial;
            current = value;
            step = (step * 1.5).min(1.0);
        } else {
            step *= 0.93;
        }
        if step < 1e-10 {
            break;
        }
    }
    current
}

/// Rank-one factors on the leading Schmidt pair of `v`, the optimal product
/// for a pure state.
fn leading_schmidt_factors(
    v: &[C64],
    d1: usize,
    d2: usize,
) -> (DMatrix<C64>, DMatrix<C64>) {
    let m = DMatrix::from_fn(d1, d2, |i, j| v[i * d2 + j]);
    let svd = m.svd(true, true);
    let k = svd.singular_values.imax();
    let u = svd.u.expect("requested").column(k).into_owned();
    let vt = svd.v_t.expect("requested").row(k).transpose();
    let mut la = DMatrix::zeros(d1, d1);
    la.set_column(0, &u);
    let mut lb = DMatrix::zeros(d2, d2);
    lb.set_column(0, &vt.map(|x| x.conj()));
    (la, lb)
}

/// `L L† / tr(L L†)`.
fn gram(l: &DMatrix<C64>) -> DMatrix<C64> {
    let g = l * l.adjoint();
    let t = g.trace().re;
    g / C64::new(t, 0.0)
}

/// `V √Λ` for a PSD matrix, so that `L L†` reproduces it exactly.
fn psd_factor(m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = eig_unchecked(m.clone());
    let mut l = eig.vectors.into_dmatrix();
    for (k, &x) in eig.values.iter().enumerate() {
        l.column_mut(k).scale_mut(x.max(0.0).sqrt());
    }
    normalize(&mut l);
    l
}

fn random_factor<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let mut l = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    normalize(&mut l);
    l
}

fn normalize(l: &mut DMatrix<C64>) {
    let n = l.norm();
    if n > 0.0 {
        l.unscale_mut(n);
    }
}

/// The objective as a function of one factor with the other held fixed.
///
/// With `Ω_k` the eigenvectors of ρ reshaped to `d_opt × d_fixed` matrices
/// (weighted as described in [`c_distance_numeric`]) and `M` the fixed
/// factor, transposed (Bures) or its square root transposed (Hellinger):
/// Bures maximizes `tr √G` with `G_kl = ⟨Ω_k, δ Ω_l M⟩`, Hellinger maximizes
/// `Σ_k Re⟨Ω_k, √δ Ω_k M⟩`.
struct Phase<'a> {
    kind: MonotoneKind,
    omegas: &'a [DMatrix<C64>],
    carried: Vec<DMatrix<C64>>,
}

impl<'a> Phase<'a> {
    fn new(kind: MonotoneKind, omegas: &'a [DMatrix<C64>], fixed_t: &DMatrix<C64>) -> Self {
        let m = match kind {
            MonotoneKind::Bures => fixed_t.clone(),
            _ => sqrt_psd(fixed_t),
        };
        let carried = omegas.iter().map(|o| o * &m).collect();
        Self { kind, omegas, carried }
    }

    fn score(&self, delta: &DMatrix<C64>) -> f64 {
        match self.kind {
            MonotoneKind::Bures => {
                let r = self.omegas.len();
                let moved: Vec<DMatrix<C64>> = self.carried.iter().map(|x| delta * x).collect();
                if r == 1 {
                    return self.omegas[0].dotc(&moved[0]).re.max(0.0).sqrt();
                }
                let g = DMatrix::from_fn(r, r, |k, l| self.omegas[k].dotc(&moved[l]));
                let g = (&g + g.adjoint()) * C64::new(0.5, 0.0);
                eig_unchecked(g).values.iter().map(|&x| x.max(0.0).sqrt()).sum()
            }
            _ => {
                let root = sqrt_psd(delta);
                self.omegas
                    .iter()
                    .zip(&self.carried)
                    .map(|(o, x)| o.dotc(&(&root * x)).re)
                    .sum()
            }
        }
    }
}

fn sqrt_psd(m: &DMatrix<C64>) -> DMatrix<C64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    eig_unchecked(h).map_values(|x| x.max(0.0).sqrt()).into_dmatrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::{haar_pure, random_spectrum, random_unitary, stream_rng};
    use crate::qcore::strictly_correlated_cc;
    use crate::LN2;

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
            .unwrap()
    }

    #[test]
    fn spectral_function_examples() {
        let half = Spectrum::uniform(2).unwrap();
        let u4 = Spectrum::uniform(4).unwrap();
        assert!((f_db(&half) - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-15);
        assert!((f_dh(&u4) - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((f_db(&u4) - 1.0).abs() < 1e-15);
        let one = Spectrum::point_mass();
        for kind in MonotoneKind::ALL {
            assert_eq!(kind.f(&one), 0.0);
            assert_eq!(kind.f_tilde(&one), 0.0);
        }
        assert_eq!(f_tilde(MonotoneKind::Hellinger, &half), f_db(&half));
        assert_eq!(f_tilde(MonotoneKind::MutualInformation, &half), LN2);
    }

    #[test]
    fn c_max_examples() {
        assert!((c_max(MonotoneKind::Bures, 4) - 1.0).abs() < 1e-15);
        assert!((c_max(MonotoneKind::Hellinger, 4) - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((c_max(MonotoneKind::MutualInformation, 4) - 2.0 * 4f64.ln()).abs() < 1e-15);
        for d in 1..10 {
            let u = Spectrum::uniform(d).unwrap();
            for kind in MonotoneKind::ALL {
                assert!((kind.c_max(d) - kind.f(&u)).abs() < 1e-14, "{kind} d={d}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in MonotoneKind::ALL {
            assert_eq!(kind.name().parse::<MonotoneKind>().unwrap(), kind);
        }
        assert!("relative_entropy".parse::<MonotoneKind>().is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let split = BipartiteSplit::qubits();
        let bell = bell().projector();
        assert!((mutual_information(&bell, split).unwrap() - 2.0 * LN2).abs() < 1e-12);
        let product = DensityMatrix::from_diagonal(&[0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4]).unwrap();
        assert!(mutual_information(&product, split).unwrap().abs() < 1e-12);
        let cc = strictly_correlated_cc(&Spectrum::uniform(2).unwrap(), 2, 2).unwrap();
        assert!((mutual_information(&cc, split).unwrap() - LN2).abs() < 1e-12);
        let wrong = BipartiteSplit::new(2, 3).unwrap();
        assert!(mutual_information(&bell, wrong).is_err());
    }

    #[test]
    fn mutual_information_of_pure_state_is_twice_entanglement_entropy() {
        let mut rng = stream_rng(11, 0);
        let split = BipartiteSplit::new(2, 3).unwrap();
        for _ in 0..50 {
            let psi = haar_pure(6, &mut rng).unwrap();
            let i = mutual_information(&psi.projector(), split).unwrap();
            let exact = c_on_pure(&psi, split, MonotoneKind::MutualInformation).unwrap();
            assert!((i - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn c_on_pure_examples() {
        let split = BipartiteSplit::qubits();
        let product = PureState::basis(4, 0).unwrap();
        for kind in MonotoneKind::ALL {
            assert_eq!(c_on_pure(&product, split, kind).unwrap(), 0.0);
        }
        let b = bell();
        assert!((c_on_pure(&b, split, MonotoneKind::MutualInformation).unwrap() - 2.0 * LN2).abs() < 1e-12);
        assert!((c_on_pure(&b, split, MonotoneKind::Bures).unwrap() - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!(c_on_pure(&b, BipartiteSplit::new(2, 3).unwrap(), MonotoneKind::Bures).is_err());
    }

    #[test]
    fn closed_forms_are_local_unitary_invariant() {
        let mut rng = stream_rng(12, 0);
        let split = BipartiteSplit::new(2, 3).unwrap();
        for _ in 0..1000 {
            let psi = haar_pure(6, &mut rng).unwrap();
            let u1 = random_unitary(2, &mut rng);
            let u2 = random_unitary(3, &mut rng);
            let moved = psi.apply_local(split, &u1, &u2).unwrap();
            for kind in MonotoneKind::ALL {
                let a = c_on_pure(&psi, split, kind).unwrap();
                let b = c_on_pure(&moved, split, kind).unwrap();
                assert!((a - b).abs() < 1e-9, "{kind}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn f_tilde_never_exceeds_f() {
        let mut rng = stream_rng(13, 0);
        for _ in 0..10_000 {
            let n = rng.random_range(1..=8);
            let p = random_spectrum(n, &mut rng).unwrap();
            for kind in MonotoneKind::ALL {
                assert!(kind.f_tilde(&p) <= kind.f(&p) + 1e-15);
            }
        }
    }

    #[test]
    fn uniform_is_the_unique_maximizer() {
        let mut rng = stream_rng(14, 0);
        for _ in 0..2000 {
            let d = rng.random_range(2..=6);
            let p = random_spectrum(d, &mut rng).unwrap();
            if p.first() - p.get(d - 1) < 1e-9 {
                continue;
            }
            for kind in MonotoneKind::ALL {
                assert!(kind.c_max(d) > kind.f(&p), "{kind} at {:?}", p.as_slice());
            }
        }
    }

    #[test]
    fn numeric_distance_of_product_state_vanishes() {
        let mut rng = stream_rng(15, 0);
        let a = DensityMatrix::from_diagonal(&[0.8, 0.2]).unwrap();
        let u = random_unitary(3, &mut rng);
        let b = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap().conjugate_by(&u).unwrap();
        let rho = a.kron(&b);
        let split = BipartiteSplit::new(2, 3).unwrap();
        for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
            let c = c_distance_numeric(&rho, split, kind, &AltMin::default(), &mut rng).unwrap();
            assert!(c < 1e-6, "{kind}: {c}");
        }
        assert!(c_distance_numeric(&rho, split, MonotoneKind::MutualInformation, &AltMin::default(), &mut rng).is_err());
    }

    #[test]
    fn numeric_distance_matches_pure_closed_form() {
        let mut rng = stream_rng(16, 0);
        let split = BipartiteSplit::qubits();
        for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
            for _ in 0..100 {
                let psi = haar_pure(4, &mut rng).unwrap();
                let exact = c_on_pure(&psi, split, kind).unwrap();
                let numeric = c_distance_numeric(&psi.projector(), split, kind, &AltMin::default(), &mut rng).unwrap();
                let gap = numeric - exact;
                assert!((-1e-9..=1e-3).contains(&gap), "{kind}: gap {gap}");
            }
        }
    }

    #[test]
    fn numeric_distance_matches_strictly_correlated_closed_form() {
        let mut rng = stream_rng(17, 0);
        let split = BipartiteSplit::new(3, 3).unwrap();
        for _ in 0..10 {
            let p = random_spectrum(3, &mut rng).unwrap();
            let rho = strictly_correlated_cc(&p, 3, 3).unwrap();
            for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
                let numeric = c_distance_numeric(&rho, split, kind, &AltMin::default(), &mut rng).unwrap();
                assert!((numeric - f_db(&p)).abs() < 1e-3, "{kind}: {numeric} vs {}", f_db(&p));
            }
        }
    }

    #[test]
    fn discarding_part_of_b_cannot_raise_correlations() {
        let mut rng = stream_rng(18, 0);
        // A ⊗ B′ ⊗ B″ = 2 ⊗ 2 ⊗ 2
        let full = BipartiteSplit::new(2, 4).unwrap();
        let keep = BipartiteSplit::new(4, 2).unwrap();
        let reduced_split = BipartiteSplit::qubits();
        for _ in 0..100 {
            let psi = haar_pure(8, &mut rng).unwrap();
            let traced = partial_trace(&psi.projector(), keep, Subsystem::First).unwrap();
            for kind in [MonotoneKind::Bures, MonotoneKind::Hellinger] {
                let whole = c_on_pure(&psi, full, kind).unwrap();
                let part = c_distance_numeric(&traced, reduced_split, kind, &AltMin::default(), &mut rng).unwrap();
                assert!(part <= whole + 1e-3, "{kind}: {part} > {whole}");
            }
        }
    }
}
