//! Tight upper bounds on two-qubit internal entanglement as a function of
//! external correlations, and the machinery used to derive and check them.
//!
//! For the Bures and Hellinger monotones the constraint `f(p) = x` fixes the
//! largest eigenvalue `p1 = 1 − y(x)`, with `y = x² − x⁴/4` (Bures) and
//! `y = x²/2` (Hellinger). The bound is then `ξ(x) = u(y(x))`.

use crate::correlations::MonotoneKind;
use crate::error::{domain, Result};
use crate::measures::s22_padded;
use crate::qcore::{xlnx, Spectrum};
use crate::LN2;

/// Slack accepted on interval endpoints before an argument is rejected.
const EDGE_TOL: f64 = 1e-12;

fn clamp_to(x: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if !x.is_finite() || x < lo - EDGE_TOL || x > hi + EDGE_TOL {
        return domain(format!("{what} = {x} outside [{lo}, {hi}]"));
    }
    Ok(x.clamp(lo, hi))
}

/// Sign selecting `w_+` or `w_−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `w_±(y) = −(1 ± √(1−y²)) ln[(1 ± √(1−y²))/2] / 2`.
pub fn w_pm(y: f64, branch: Branch) -> Result<f64> {
    let y = clamp_to(y, 0.0, 1.0, "y")?;
    // (1 − √(1−y²))/2 written as y²/(2(1 + √(1−y²))) keeps digits at small y
    let small = y * y / (1.0 + (1.0 - y * y).sqrt()) / 2.0;
    Ok(match branch {
        Branch::Plus => -(1.0 - small) * (-small).ln_1p(),
        Branch::Minus => -xlnx(small),
    })
}

/// `v(y) = w_+(y) + w_−(y)`: entanglement of formation at concurrence `y`.
pub fn v(y: f64) -> Result<f64> {
    Ok(w_pm(y, Branch::Plus)? + w_pm(y, Branch::Minus)?)
}

/// Piecewise bound in terms of `y = 1 − p1`:
/// `v(1−y)` on `[0, 1/2]`, `v(2−3y)` on `[1/2, 2/3]`, `0` on `[2/3, 3/4]`.
pub fn u(y: f64) -> Result<f64> {
    let y = clamp_to(y, 0.0, 0.75, "y")?;
    if y <= 0.5 {
        v(1.0 - y)
    } else if y <= 2.0 / 3.0 {
        v((2.0 - 3.0 * y).max(0.0))
    } else {
        Ok(0.0)
    }
}

fn distance_kind(kind: MonotoneKind) -> Result<MonotoneKind> {
    match kind {
        MonotoneKind::Bures | MonotoneKind::Hellinger => Ok(kind),
        MonotoneKind::MutualInformation => {
            domain("no closed form for mutual information; use the numeric infimum")
        }
    }
}

/// `y(x) = 1 − p1` on the slice `f(p) = x` of a distance monotone.
pub fn y_of_x(kind: MonotoneKind, x: f64) -> Result<f64> {
    let kind = distance_kind(kind)?;
    let x = clamp_to(x, 0.0, kind.c_max(4), "x")?;
    Ok(match kind {
        MonotoneKind::Bures => x * x - x.powi(4) / 4.0,
        _ => x * x / 2.0,
    })
}

/// `ξ₂,₂(x)` for entanglement of formation against `C^(D_B)` or `C^(D_H)`.
pub fn xi_ef(kind: MonotoneKind, x: f64) -> Result<f64> {
    u(y_of_x(kind, x)?)
}

/// Classical-classical bound `ζ₂,₂`. For the Hellinger monotone it coincides
/// with the Bures `ξ₂,₂`, on `[0, 1]`.
pub fn zeta_ef(kind: MonotoneKind, x: f64) -> Result<f64> {
    match kind {
        MonotoneKind::Hellinger => xi_ef(MonotoneKind::Bures, x),
        _ => domain(format!("closed-form ζ is available for hellinger only, not {kind}")),
    }
}

/// `ζ(x) = ξ(2x)` for the mutual information, `x ∈ [0, ln d]`.
pub fn zeta_mi_of_xi(xi: impl Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("x = {x} must be non-negative"));
    }
    xi(2.0 * x)
}

/// Smallest `x` from which `ξ₂,₂` vanishes, where `y(x) = 2/3`.
pub fn threshold(kind: MonotoneKind) -> Result<f64> {
    match distance_kind(kind)? {
        MonotoneKind::Hellinger => Ok((4.0_f64 / 3.0).sqrt()),
        // lower root of t − t²/4 = 2/3 with t = x²
        _ => Ok((2.0 - (4.0_f64 / 3.0).sqrt()).sqrt()),
    }
}

/// A spectrum on the slice `f(p) = x` whose spectral entropy attains the
/// infimum, so that `max_ef_state` of it meets `ξ₂,₂(x)`:
/// `(1−y, y)` for `y ≤ 1/2`, `(1−y, 1−y, 2y−1)` for `y ≤ 2/3`, and
/// `(1−y, y/3, y/3, y/3)` beyond, where the bound is zero anyway.
pub fn optimal_spectrum(kind: MonotoneKind, x: f64) -> Result<Spectrum> {
    let y = y_of_x(kind, x)?;
    let weights = if y <= 0.5 {
        vec![1.0 - y, y]
    } else if y <= 2.0 / 3.0 {
        vec![1.0 - y, 1.0 - y, 2.0 * y - 1.0]
    } else {
        vec![1.0 - y, y / 3.0, y / 3.0, y / 3.0]
    };
    Spectrum::from_weights(&weights)
}

/// Components closer than this to the largest one count as tied with it.
const TIE_TOL: f64 = 1e-14;

/// Member `p^(β)` of the deformation family that runs from `p` (β = 1) to
/// the point mass (β → ∞), increasing in the majorization order.
///
/// Without a tie at the top, `p_i^(β) ∝ (p_i/p1)^β`. If the first `j > 1`
/// components are tied, the first is first pulled up linearly,
/// `p̃1 = p1 + η`, `p̃_{2..j} = p1 − η/(j−1)` for `η = β − 1 ≤ η*`, where `η*`
/// is the largest value keeping the order (it closes the first strict gap),
/// and the power law with exponent `β − η*` takes over from `p̃^(η*)`.
pub fn beta_deform(p: &Spectrum, beta: f64) -> Result<Spectrum> {
    if !(beta >= 1.0) {
        return domain(format!("β = {beta} must be at least 1"));
    }
    let c = p.as_slice();
    if c.len() == 1 || beta == 1.0 {
        return Ok(p.clone());
    }
    let top = c[0];
    let tied = c.iter().take_while(|&&x| top - x <= TIE_TOL).count();
    if tied == 1 {
        return power_law(c, beta);
    }
    let next = c.get(tied).copied().unwrap_or(0.0);
    let eta_star = (tied - 1) as f64 * (top - next);
    let eta = beta - 1.0;
    if eta <= eta_star {
        Spectrum::from_weights(&lifted(c, tied, eta))
    } else {
        power_law(&lifted(c, tied, eta_star), beta - eta_star)
    }
}

fn lifted(c: &[f64], tied: usize, eta: f64) -> Vec<f64> {
    let top = c[0];
    let mut out = c.to_vec();
    out[0] = top + eta;
    for x in out.iter_mut().take(tied).skip(1) {
        *x = (top - eta / (tied - 1) as f64).max(0.0);
    }
    out
}

fn power_law(c: &[f64], exponent: f64) -> Result<Spectrum> {
    let top = c[0];
    let w: Vec<f64> = c.iter().map(|&x| (x / top).powf(exponent)).collect();
    Spectrum::from_weights(&w)
}

/// Finds `β` with `f(p^(β)) = target` by bracketing and bisection, for a
/// Schur-concave `f` with `f(p) ≥ target ≥ f(point mass)`. Returns the member
/// of the family closest to the target.
pub fn bisect_beta(
    p: &Spectrum,
    target: f64,
    f: impl Fn(&Spectrum) -> f64,
) -> Result<(f64, Spectrum)> {
    let start = f(p);
    if target > start + EDGE_TOL {
        return domain(format!("target {target} exceeds f(p) = {start}"));
    }
    if target >= start {
        return Ok((1.0, p.clone()));
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    loop {
        let q = beta_deform(p, hi)?;
        if f(&q) <= target {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Ok((hi, q));
        }
    }
    let mut best = (hi, beta_deform(p, hi)?);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let q = beta_deform(p, mid)?;
        let value = f(&q);
        if (value - target).abs() < (f(&best.1) - target).abs() {
            best = (mid, q);
        }
        if value > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// Numeric infimum `g₄(x) = inf { s₂,₂(p) : p ∈ E₄, f(p) = x }`.
///
/// For the distance monotones `p1 = 1 − y(x)` is fixed and the search runs
/// over `(p2, p4)` with `p3 = y − p2 − p4`, keeping the points that satisfy
/// `p4 ≥ 0`, `p2 ≤ 1 − y`, `2p2 + p4 ≥ y` and `2p4 + p2 ≤ y`. For the mutual
/// information `h(p) = x/2`; the search again runs over `(p2, p4)`, and the
/// remaining freedom `p1 + p3 = 1 − p2 − p4` is fixed by bisection on `p3`
/// (the entropy grows as `p3` approaches `p1`). A `grid_resolution`-cell grid
/// is followed by local refinement around the best cell; ties keep the
/// lowest-index cell.
pub fn g_d_numeric(kind: MonotoneKind, d: usize, x: f64, grid_resolution: usize) -> Result<f64> {
    if d != 4 {
        return domain(format!("numeric g_d is implemented for d = 4, got {d}"));
    }
    if grid_resolution < 100 {
        return domain(format!("grid resolution {grid_resolution} below 100"));
    }
    let x = clamp_to(x, 0.0, kind.c_max(4), "x")?;
    match kind {
        MonotoneKind::MutualInformation => g4_entropy_slice(x / 2.0, grid_resolution),
        _ => Ok(g4_largest_eigenvalue_slice(y_of_x(kind, x)?, grid_resolution)),
    }
}

/// `ξ(x) = ln 2 − g₄(x)` from the numeric infimum.
pub fn xi_numeric(kind: MonotoneKind, x: f64, grid_resolution: usize) -> Result<f64> {
    Ok(LN2 - g_d_numeric(kind, 4, x, grid_resolution)?)
}

const FEAS_TOL: f64 = 1e-12;

/// Slack on entropy values at the edge of a slice.
const ENTROPY_TOL: f64 = 1e-10;

fn largest_eigenvalue_slice_feasible(y: f64, p2: f64, p4: f64) -> bool {
    p4 >= -FEAS_TOL
        && p2 <= 1.0 - y + FEAS_TOL
        && 2.0 * p2 + p4 >= y - FEAS_TOL
        && 2.0 * p4 + p2 <= y + FEAS_TOL
}

fn g4_largest_eigenvalue_slice(y: f64, res: usize) -> f64 {
    let p1 = 1.0 - y;
    let eval = |p2: f64, p4: f64| -> Option<f64> {
        if !largest_eigenvalue_slice_feasible(y, p2, p4) {
            return None;
        }
        let p3 = (y - p2 - p4).max(0.0);
        Some(s22_padded(&[p1, p2.max(0.0), p3, p4.max(0.0)]))
    };
    // p2 ∈ [y/3, min(y, 1−y)], p4 ∈ [max(0, y − 2p2), (y − p2)/2]
    let p2_lo = y / 3.0;
    let p2_hi = y.min(1.0 - y).max(p2_lo);
    let p4_range = |p2: f64| ((y - 2.0 * p2).max(0.0), ((y - p2) / 2.0).max(0.0));
    let mut best = f64::INFINITY;
    let mut best_at = (p2_lo, 0.0);
    let scan = |p2_lo: f64, p2_hi: f64, n: usize, best: &mut f64, best_at: &mut (f64, f64)| {
        for a in 0..=n {
            let p2 = p2_lo + (p2_hi - p2_lo) * a as f64 / n as f64;
            let (lo4, hi4) = p4_range(p2);
            for b in 0..=n {
                let p4 = lo4 + (hi4 - lo4) * b as f64 / n as f64;
                if let Some(s) = eval(p2, p4) {
                    if s < *best {
                        *best = s;
                        *best_at = (p2, p4);
                    }
                }
            }
        }
    };
    scan(p2_lo, p2_hi, res, &mut best, &mut best_at);
    let mut width = (p2_hi - p2_lo) / res as f64;
    for _ in 0..8 {
        let lo = (best_at.0 - width).max(p2_lo);
        let hi = (best_at.0 + width).min(p2_hi);
        scan(lo, hi, 20, &mut best, &mut best_at);
        width /= 10.0;
    }
    best
}

fn four_entropy(p: [f64; 4]) -> f64 {
    -p.iter().map(|&x| xlnx(x)).sum::<f64>()
}

/// Best `s₂,₂` at fixed `(p2, p4)` on the entropy slice `h = target`, if the
/// slice meets that line.
fn entropy_slice_point(target: f64, p2: f64, p4: f64) -> Option<f64> {
    if p2 < 0.0 || p4 < 0.0 || p4 > p2 {
        return None;
    }
    let rest = 1.0 - p2 - p4;
    let lo = p4;
    let hi = p2.min(rest - p2);
    if hi < lo {
        return None;
    }
    let h_at = |p3: f64| four_entropy([rest - p3, p2, p3, p4]);
    let (h_lo, h_hi) = (h_at(lo), h_at(hi));
    if target < h_lo - ENTROPY_TOL || target > h_hi + ENTROPY_TOL {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if h_at(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    let p3 = if target <= h_lo {
        lo
    } else if target >= h_hi {
        hi
    } else {
        0.5 * (a + b)
    };
    Some(s22_padded(&[rest - p3, p2, p3, p4]))
}

/// Point of `[lo, hi]` where the monotone `f` meets `target`, or the endpoint
/// whose value is closest when the target is out of range.
fn crossing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> f64 {
    let (f_lo, f_hi) = (f(lo), f(hi));
    let increasing = f_hi >= f_lo;
    let (min_at, max_at, f_min, f_max) = if increasing { (lo, hi, f_lo, f_hi) } else { (hi, lo, f_hi, f_lo) };
    if target <= f_min {
        return min_at;
    }
    if target >= f_max {
        return max_at;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid) < target) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Largest admissible `p4` for a given `p2`.
fn p4_cap(p2: f64) -> f64 {
    p2.min((1.0 - 2.0 * p2) / 2.0).max(0.0)
}

/// Largest entropy with second eigenvalue `p2` and smallest `p4`.
fn entropy_top(p2: f64, p4: f64) -> f64 {
    let rest = 1.0 - p2 - p4;
    let p3 = p2.min(rest - p2);
    four_entropy([rest - p3, p2, p3, p4])
}

fn g4_entropy_slice(target: f64, res: usize) -> Result<f64> {
    let target = target.clamp(0.0, 2.0 * LN2);
    // The slice is thin near both ends of the entropy range, so the grid is
    // laid over the feasible (p2, p4) region rather than the whole simplex.
    // Along p2 the largest entropy rises on [0, 1/4] and falls after, the
    // smallest one, h(1 − p2, p2), rises throughout.
    let a = crossing(|p2| entropy_top(p2, p4_cap(p2)), 0.0, 0.25, target);
    let b1 = crossing(|p2| four_entropy([1.0 - p2, p2, 0.0, 0.0]), 0.0, 0.5, target);
    let b2 = crossing(|p2| entropy_top(p2, p4_cap(p2)), 0.25, 0.5, target);
    let b = b1.min(b2).max(a);
    let mut best = f64::INFINITY;
    let mut best_at = (0.0, 0.0);
    for i in 0..=res {
        let p2 = a + (b - a) * i as f64 / res as f64;
        let cap = p4_cap(p2);
        // both entropies grow with p4
        let lo4 = crossing(|p4| entropy_top(p2, p4), 0.0, cap, target);
        let hi4 = crossing(|p4| four_entropy([1.0 - p2 - 2.0 * p4, p2, p4, p4]), 0.0, cap, target).max(lo4);
        for j in 0..=res {
            let p4 = lo4 + (hi4 - lo4) * j as f64 / res as f64;
            if let Some(s) = entropy_slice_point(target, p2, p4) {
                if s < best {
                    best = s;
                    best_at = (p2, p4);
                }
            }
        }
    }
    if !best.is_finite() {
        return domain(format!(
            "no point of the entropy slice h = {target} resolved at grid {res}"
        ));
    }
    let res = res.max(1);
    // pattern search around the best cell
    let mut step = (b - a).max(1e-6) / res as f64;
    while step > 1e-13 {
        let mut moved = false;
        for (da, db) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let cand = (best_at.0 + da * step, best_at.1 + db * step);
            if let Some(s) = entropy_slice_point(target, cand.0, cand.1) {
                if s < best {
                    best = s;
                    best_at = cand;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    Ok(best)
}

/// Correlation value beyond which `ξ` vanishes when `f` is the order-`alpha`
/// Rényi entropy: `ln d − alpha / (2 d (d − 1))`, `d = d1 d2`.
pub fn renyi_threshold(d1: usize, d2: usize, alpha: f64) -> Result<f64> {
    if d1 < 2 || d2 < d1 {
        return domain(format!("split ({d1}, {d2}) needs d2 ≥ d1 ≥ 2"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("Rényi order {alpha} outside (0, 1]"));
    }
    let d = (d1 * d2) as f64;
    Ok(d.ln() - alpha / (2.0 * d * (d - 1.0)))
}

/// One `(x, bound)` point of a [`BoundCurve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub bound: f64,
}

/// A bound sampled on an equally spaced grid covering its whole domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub kind: MonotoneKind,
    pub samples: Vec<CurvePoint>,
}

/// Default number of grid points of an emitted curve.
pub const DEFAULT_CURVE_GRID: usize = 201;

/// Grid resolution used when a curve needs the numeric infimum.
pub const CURVE_GD_RESOLUTION: usize = 200;

/// `n` equally spaced points on `[0, end]` with both ends exact.
pub fn grid(end: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return domain(format!("grid needs at least 2 points, got {n}"));
    }
    Ok((0..n)
        .map(|k| if k + 1 == n { end } else { end * k as f64 / (n - 1) as f64 })
        .collect())
}

impl BoundCurve {
    /// `ξ` on `[0, c_max]`; numeric for the mutual information.
    pub fn xi(kind: MonotoneKind, points: usize) -> Result<Self> {
        let end = kind.c_max(4);
        let samples = grid(end, points)?
            .into_iter()
            .map(|x| {
                let bound = match kind {
                    MonotoneKind::MutualInformation => {
                        xi_numeric(kind, x, CURVE_GD_RESOLUTION)?
                    }
                    _ => xi_ef(kind, x)?,
                };
                Ok(CurvePoint { x, bound })
            })
            .collect::<Result<_>>()?;
        Ok(Self { kind, samples })
    }

    /// `ζ` on `[0, c̃_max]`: closed form for Hellinger, `ξ(2x)` for the mutual
    /// information.
    pub fn zeta(kind: MonotoneKind, points: usize) -> Result<Self> {
        let end = kind.c_tilde_max(4)?;
        let samples = grid(end, points)?
            .into_iter()
            .map(|x| {
                let bound = match kind {
                    MonotoneKind::MutualInformation => zeta_mi_of_xi(
                        |t| xi_numeric(kind, t.min(kind.c_max(4)), CURVE_GD_RESOLUTION),
                        x,
                    )?,
                    _ => zeta_ef(kind, x)?,
                };
                Ok(CurvePoint { x, bound })
            })
            .collect::<Result<_>>()?;
        Ok(Self { kind, samples })
    }
}
