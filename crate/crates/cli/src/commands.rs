//! The five subcommands.

use entbound::bounds::{
    bisect_beta, grid, optimal_spectrum, threshold, xi_ef, xi_numeric, zeta_ef, zeta_mi_of_xi,
    g_d_numeric,
};
use entbound::correlations::{c_distance_numeric, c_on_pure, f_db, AltMin, MonotoneKind};
use entbound::measures::{entanglement_of_formation, max_ef_state};
use entbound::qcore::random::stream_rng;
use entbound::qcore::{
    haar_pure, partial_trace, purify, spectrum, strictly_correlated_cc, BipartiteSplit, Spectrum,
    Subsystem,
};
use entbound::LN2;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{CommandName, RunConfig, Series};
use crate::report::{Cell, Report, Row};
use crate::CliError;

/// Grid points of the tabulated mutual-information bound used by `verify`.
pub const MI_TABLE_POINTS: usize = 201;

/// Grid resolution of every numeric infimum evaluated by the harness.
pub const GD_RESOLUTION: usize = 100;

/// Runs the configured subcommand on a pool of `config.workers` threads.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", config.workers)))?;
    pool.install(|| match config.command {
        CommandName::Curve => curve(config),
        CommandName::Verify => verify(config),
        CommandName::Tightness => tightness(config),
        CommandName::Ccbound => ccbound(config),
        CommandName::Gd => gd(config),
    })
}

fn par_grid<T: Send>(
    xs: &[f64],
    f: impl Fn(usize, f64) -> entbound::Result<T> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    Ok(xs
        .par_iter()
        .enumerate()
        .map(|(k, &x)| f(k, x))
        .collect::<entbound::Result<Vec<T>>>()?)
}

fn curve(config: &RunConfig) -> Result<Report, CliError> {
    let kind = config.kind;
    let end = match config.series {
        Series::Xi => kind.c_max(4),
        Series::Zeta => kind.c_tilde_max(4)?,
    };
    let xs = grid(end, config.grid)?;
    let bounds = par_grid(&xs, |_, x| match (config.series, kind) {
        (Series::Zeta, MonotoneKind::MutualInformation) => zeta_mi_of_xi(
            |t| xi_numeric(kind, t.min(kind.c_max(4)), GD_RESOLUTION),
            x,
        ),
        (Series::Zeta, _) => zeta_ef(kind, x),
        (Series::Xi, _) => xi_ef(kind, x),
    })?;
    let non_increasing = bounds.windows(2).all(|w| w[1] <= w[0]);
    let first_zero = xs.iter().zip(&bounds).find(|(_, &b)| b == 0.0).map(|(&x, _)| x);
    let rows = xs
        .iter()
        .zip(&bounds)
        .map(|(&x, &b)| Row::new(vec![Cell::Real(x), Cell::Real(b)]))
        .collect();
    Ok(Report {
        config: config.clone(),
        header: vec!["x", "bound"],
        rows,
        summary: vec![
            ("points", json!(xs.len())),
            ("bound_at_zero", json!(bounds[0])),
            ("bound_at_end", json!(bounds[bounds.len() - 1])),
            ("first_zero_x", json!(first_zero)),
            ("non_increasing", json!(non_increasing)),
        ],
        passed: non_increasing,
    })
}

/// The mutual-information bound tabulated on `[0, 2 ln 4]`. Lookups round
/// down to the nearest grid point, which can only raise the bound since it is
/// non-increasing.
pub struct MiTable {
    step: f64,
    values: Vec<f64>,
}

impl MiTable {
    pub fn build(points: usize) -> Result<Self, CliError> {
        let kind = MonotoneKind::MutualInformation;
        let xs = grid(kind.c_max(4), points)?;
        let values = par_grid(&xs, |_, x| xi_numeric(kind, x, GD_RESOLUTION))?;
        Ok(Self { step: xs[1] - xs[0], values })
    }

    pub fn bound(&self, x: f64) -> f64 {
        let k = ((x / self.step).floor().max(0.0) as usize).min(self.values.len() - 1);
        self.values[k]
    }

    /// Smallest tabulated `x` from which the bound is zero.
    pub fn zero_from(&self) -> f64 {
        let k = self.values.iter().position(|&v| v <= 0.0).unwrap_or(self.values.len() - 1);
        k as f64 * self.step
    }
}

struct Sample {
    x: f64,
    e: f64,
    bound: f64,
    spectrum: Vec<f64>,
}

fn verify(config: &RunConfig) -> Result<Report, CliError> {
    let kind = config.kind;
    let split = BipartiteSplit::new(4, config.dim_b)?;
    let table = match kind {
        MonotoneKind::MutualInformation => Some(MiTable::build(MI_TABLE_POINTS)?),
        _ => None,
    };
    let zero_from = match &table {
        Some(t) => t.zero_from(),
        None => threshold(kind)?,
    };
    let samples: Vec<Sample> = (0..config.samples)
        .into_par_iter()
        .map(|i| -> entbound::Result<Sample> {
            let mut rng = stream_rng(config.seed, i as u64);
            let psi = haar_pure(split.dim(), &mut rng)?;
            let rho_a = psi.reduced(split, Subsystem::First)?;
            let x = c_on_pure(&psi, split, kind)?.min(kind.c_max(4));
            let e = entanglement_of_formation(&rho_a)?;
            let bound = match &table {
                Some(t) => t.bound(x),
                None => xi_ef(kind, x)?,
            };
            Ok(Sample { x, e, bound, spectrum: spectrum(&rho_a).into_vec() })
        })
        .collect::<entbound::Result<_>>()?;

    let tol = config.tolerance;
    let mut violations = 0usize;
    let mut max_violation = 0.0_f64;
    let mut min_slack = f64::INFINITY;
    let mut above = 0usize;
    let mut above_entangled = 0usize;
    let mut rows = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let slack = s.bound - s.e;
        if slack < -tol {
            violations += 1;
        }
        if -slack > max_violation {
            max_violation = -slack;
        }
        min_slack = min_slack.min(slack);
        if s.x > zero_from {
            above += 1;
            if s.e > tol {
                above_entangled += 1;
            }
        }
        rows.push(Row {
            cells: vec![Cell::Index(i), Cell::Real(s.x), Cell::Real(s.e), Cell::Real(s.bound), Cell::Real(slack)],
            extra: Some(("spectrum", json!(s.spectrum))),
        });
    }
    Ok(Report {
        config: config.clone(),
        header: vec!["idx", "x", "e", "bound", "slack"],
        rows,
        summary: vec![
            ("samples", json!(samples.len())),
            ("violations", json!(violations)),
            ("max_violation", json!(max_violation)),
            ("min_slack", json!(min_slack)),
            ("zero_bound_from", json!(zero_from)),
            ("above_zero_bound", json!(above)),
            ("above_zero_bound_entangled", json!(above_entangled)),
        ],
        passed: violations == 0 && above_entangled == 0,
    })
}

fn tightness(config: &RunConfig) -> Result<Report, CliError> {
    let kind = config.kind;
    let xs = grid(kind.c_max(4), config.grid)?;
    let rows = par_grid(&xs, |_, x| {
        let p = optimal_spectrum(kind, x)?;
        let rho = max_ef_state(&p)?;
        let pure = purify(&rho);
        let c = c_on_pure(&pure.state, pure.split, kind)?;
        let e = entanglement_of_formation(&rho)?;
        let bound = xi_ef(kind, x)?;
        Ok([x, c, e, bound, bound - e])
    })?;
    let max_gap = rows.iter().map(|r| r[4].abs()).fold(0.0, f64::max);
    let max_c_error = rows.iter().map(|r| (r[1] - r[0]).abs()).fold(0.0, f64::max);
    Ok(Report {
        config: config.clone(),
        header: vec!["x", "c", "e", "bound", "gap"],
        rows: rows.iter().map(|r| Row::new(r.iter().map(|&v| Cell::Real(v)).collect())).collect(),
        summary: vec![
            ("points", json!(xs.len())),
            ("max_gap", json!(max_gap)),
            ("max_correlation_error", json!(max_c_error)),
        ],
        passed: max_gap <= config.tolerance && max_c_error <= config.tolerance,
    })
}

fn ccbound(config: &RunConfig) -> Result<Report, CliError> {
    let kind = config.kind;
    let uniform = Spectrum::uniform(4)?;
    let xs = grid(f_db(&uniform), config.grid)?;
    let split = BipartiteSplit::new(4, 4)?;
    let rows = par_grid(&xs, |k, x| {
        let (_, p) = bisect_beta(&uniform, x, f_db)?;
        let rho = strictly_correlated_cc(&p, 4, 4)?;
        let mut rng = stream_rng(config.seed, k as u64);
        let c = c_distance_numeric(&rho, split, kind, &AltMin::default(), &mut rng)?;
        let rho_a = partial_trace(&rho, split, Subsystem::First)?;
        let e = entanglement_of_formation(&rho_a)?;
        let zeta = zeta_ef(kind, x)?;
        Ok([x, f_db(&p), c, e, zeta])
    })?;
    let max_c_gap = rows.iter().map(|r| (r[2] - r[1]).abs()).fold(0.0, f64::max);
    let min_slack = rows.iter().map(|r| r[4] - r[3]).fold(f64::INFINITY, f64::min);
    let dashed_matches = xs
        .iter()
        .map(|&x| Ok(zeta_ef(kind, x)?.to_bits() == xi_ef(MonotoneKind::Bures, x)?.to_bits()))
        .collect::<entbound::Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    Ok(Report {
        config: config.clone(),
        header: vec!["x", "c_exact", "c_numeric", "e", "zeta"],
        rows: rows.iter().map(|r| Row::new(r.iter().map(|&v| Cell::Real(v)).collect())).collect(),
        summary: vec![
            ("points", json!(xs.len())),
            ("max_correlation_gap", json!(max_c_gap)),
            ("min_slack", json!(min_slack)),
            ("zeta_equals_bures_xi", json!(dashed_matches)),
        ],
        passed: max_c_gap <= config.tolerance && min_slack >= -1e-9 && dashed_matches,
    })
}

fn gd(config: &RunConfig) -> Result<Report, CliError> {
    let kind = config.kind;
    let xs = grid(kind.c_max(4), config.grid)?;
    let rows = par_grid(&xs, |_, x| {
        let g = g_d_numeric(kind, 4, x, GD_RESOLUTION)?;
        let analytic = LN2 - xi_ef(kind, x)?;
        Ok([x, g, analytic, (g - analytic).abs()])
    })?;
    let max_diff = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
    Ok(Report {
        config: config.clone(),
        header: vec!["x", "g", "analytic", "diff"],
        rows: rows.iter().map(|r| Row::new(r.iter().map(|&v| Cell::Real(v)).collect())).collect(),
        summary: vec![("points", json!(xs.len())), ("max_diff", json!(max_diff))],
        passed: max_diff <= config.tolerance,
    })
}
